#include "cmod/free_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "cmod/error.hpp"

namespace cmod {

  namespace {

    constexpr std::uint32_t empty_slot = UINT32_MAX;

    std::uint64_t hash_words(std::uint8_t const* p, std::size_t bytes) {
      std::uint64_t h = 0x243f6a8885a308d3ULL;
      for (std::size_t i = 0; i < bytes; i += 8) {
        std::uint64_t w;
        std::memcpy(&w, p + i, 8);
        h = (h ^ w) * 0x9e3779b97f4a7c15ULL;
        h ^= h >> 29;
      }
      return h ^ (h >> 32);
    }

    bool equal_words(std::uint8_t const* p, std::uint8_t const* q,
                     std::size_t bytes) {
      for (std::size_t i = 0; i < bytes; i += 8) {
        std::uint64_t x, y;
        std::memcpy(&x, p + i, 8);
        std::memcpy(&y, q + i, 8);
        if (x != y) {
          return false;
        }
      }
      return true;
    }

    // Endomorphisms of a, identity first.  Falls back to identity and
    // constant endomorphisms when a full enumeration is too large.
    std::vector<std::vector<std::uint8_t>> endomorphisms(FiniteAlgebra const& a) {
      std::size_t const                      n = a.size();
      std::vector<std::vector<std::uint8_t>> out;
      std::vector<std::uint8_t>              h(n);
      for (std::size_t x = 0; x < n; ++x) {
        h[x] = static_cast<std::uint8_t>(x);
      }
      out.push_back(h);
      auto is_hom = [&](std::vector<std::uint8_t> const& m) {
        std::vector<Element> args, img;
        for (std::size_t op = 0; op < a.num_ops(); ++op) {
          std::size_t const r   = a.signature()[op].arity;
          auto              t   = a.table(op);
          args.assign(r, 0);
          img.assign(r, 0);
          for (std::size_t idx = 0; idx < t.size(); ++idx) {
            std::size_t rest = idx;
            std::size_t jdx  = 0;
            for (std::size_t i = r; i-- > 0;) {
              args[i] = static_cast<Element>(rest % n);
              rest /= n;
            }
            for (std::size_t i = 0; i < r; ++i) {
              jdx = jdx * n + m[args[i]];
            }
            if (t[jdx] != m[t[idx]]) {
              return false;
            }
          }
        }
        return true;
      };
      if (n <= 5) {
        std::size_t total = checked_pow(n, n, SIZE_MAX);
        for (std::size_t code = 0; code < total; ++code) {
          std::size_t rest = code;
          for (std::size_t x = 0; x < n; ++x) {
            h[x] = static_cast<std::uint8_t>(rest % n);
            rest /= n;
          }
          if (h != out[0] && is_hom(h)) {
            out.push_back(h);
          }
        }
      } else {
        for (std::size_t c = 0; c < n; ++c) {
          std::fill(h.begin(), h.end(), static_cast<std::uint8_t>(c));
          if (is_hom(h)) {
            out.push_back(h);
          }
        }
      }
      return out;
    }

    std::size_t digit(std::size_t t, std::size_t i, std::size_t g, std::size_t n) {
      for (std::size_t k = i + 1; k < g; ++k) {
        t /= n;
      }
      return t % n;
    }

    // Calls visit(args) for every argument tuple of the current level whose
    // first entry is a0, in lexicographic order.
    template <typename Visit>
    void enumerate_block(std::size_t          a0,
                         std::size_t          r,
                         std::size_t          old,
                         std::size_t          cur,
                         bool                 commutative,
                         bool                 idempotent,
                         std::vector<std::uint32_t>& args,
                         Visit&&              visit) {
      args.assign(r, 0);
      args[0] = static_cast<std::uint32_t>(a0);
      if (r == 1) {
        if (a0 >= old) {
          visit(args);
        }
        return;
      }
      std::size_t const lo = commutative ? a0 : 0;
      for (std::size_t i = 1; i < r; ++i) {
        args[i] = static_cast<std::uint32_t>(lo);
      }
      while (true) {
        bool fresh = a0 >= old;
        bool same  = true;
        for (std::size_t i = 1; i < r; ++i) {
          fresh = fresh || args[i] >= old;
          same  = same && args[i] == a0;
        }
        if (fresh && !(idempotent && same)) {
          visit(args);
        }
        std::size_t i = r - 1;
        while (true) {
          if (++args[i] < cur) {
            break;
          }
          args[i] = static_cast<std::uint32_t>(lo);
          if (i == 1) {
            return;
          }
          --i;
        }
      }
    }

    struct OpInfo {
      std::size_t  index;
      std::size_t  arity;
      bool         commutative;
      bool         idempotent;
    };

  }  // namespace

  std::optional<std::size_t>
  FreeAlgebra::find_padded(std::uint8_t const* v) const {
    if (_slots.empty()) {
      return std::nullopt;
    }
    std::size_t const mask = _slots.size() - 1;
    for (std::size_t s = hash_words(v, _stride) & mask;; s = (s + 1) & mask) {
      std::uint32_t e = _slots[s];
      if (e == empty_slot) {
        return std::nullopt;
      }
      if (equal_words(v, _data.data() + e * _stride, _stride)) {
        return e;
      }
    }
  }

  std::optional<std::size_t>
  FreeAlgebra::find(std::span<std::uint8_t const> v) const {
    if (v.size() != _cols) {
      return std::nullopt;
    }
    std::vector<std::uint8_t> buf(_stride, 0);
    std::copy(v.begin(), v.end(), buf.begin());
    return find_padded(buf.data());
  }

  void FreeAlgebra::rehash(std::size_t slots) {
    _slots.assign(slots, empty_slot);
    for (std::size_t e = 0; e < _witness.size(); ++e) {
      insert_index(static_cast<std::uint32_t>(e));
    }
  }

  void FreeAlgebra::insert_index(std::uint32_t e) {
    std::size_t const mask = _slots.size() - 1;
    std::size_t s = hash_words(_data.data() + e * _stride, _stride) & mask;
    while (_slots[s] != empty_slot) {
      s = (s + 1) & mask;
    }
    _slots[s] = e;
  }

  std::vector<Element> FreeAlgebra::full_vector(std::size_t e) const {
    if (e >= size()) {
      throw std::out_of_range("element index out of range");
    }
    std::vector<Element> out(tuple_count());
    auto                 v = vector(e);
    for (std::size_t t = 0; t < out.size(); ++t) {
      out[t] = _endos[_endo_of[t]][v[_col_of[t]]];
    }
    return out;
  }

  Term FreeAlgebra::term_of(std::size_t e) const {
    if (e >= size()) {
      throw std::out_of_range("element index out of range");
    }
    std::vector<std::optional<Term>> memo(size());
    auto rec = [&](auto&& self, std::size_t x) -> Term {
      if (memo[x]) {
        return *memo[x];
      }
      Witness const& w = _witness[x];
      Term           t = Term::var(0);
      if (w.op == no_op) {
        t = Term::var(w.args[0]);
      } else {
        std::vector<Term> kids;
        for (auto c : w.args) {
          kids.push_back(self(self, c));
        }
        t = Term::app(_base.signature()[w.op].name, std::move(kids));
      }
      memo[x] = t;
      return t;
    };
    return rec(rec, e);
  }

  std::size_t FreeAlgebra::apply(std::size_t                  op,
                                 std::span<std::size_t const> args) const {
    if (op >= _base.num_ops() || args.size() != _base.signature()[op].arity) {
      throw std::invalid_argument("bad induced operation call");
    }
    for (auto x : args) {
      if (x >= size()) {
        throw std::out_of_range("element index out of range");
      }
    }
    std::size_t const         n = _base.size();
    auto                      t = _base.table(op);
    std::vector<std::uint8_t> v(_stride, 0);
    for (std::size_t c = 0; c < _cols; ++c) {
      std::size_t idx = 0;
      for (auto x : args) {
        idx = idx * n + _data[x * _stride + c];
      }
      v[c] = static_cast<std::uint8_t>(t[idx]);
    }
    auto e = find_padded(v.data());
    if (!e) {
      throw std::logic_error("free algebra not closed");
    }
    return *e;
  }

  std::vector<std::size_t>
  FreeAlgebra::endomorphism(std::span<std::size_t const> map) const {
    if (map.size() != _g) {
      throw std::invalid_argument("generator map has wrong length");
    }
    for (auto m : map) {
      if (m >= _g) {
        throw std::out_of_range("generator map entry out of range");
      }
    }
    std::size_t const          n = _base.size();
    std::vector<std::uint32_t> src_col(_cols), src_endo(_cols);
    for (std::size_t c = 0; c < _cols; ++c) {
      std::size_t t  = _kept[c];
      std::size_t t2 = 0;
      for (std::size_t i = 0; i < _g; ++i) {
        t2 = t2 * n + digit(t, map[i], _g, n);
      }
      src_col[c]  = _col_of[t2];
      src_endo[c] = _endo_of[t2];
    }
    std::vector<std::size_t>  out(size());
    std::vector<std::uint8_t> v(_stride, 0);
    for (std::size_t e = 0; e < size(); ++e) {
      auto src = vector(e);
      for (std::size_t c = 0; c < _cols; ++c) {
        v[c] = _endos[src_endo[c]][src[src_col[c]]];
      }
      auto img = find_padded(v.data());
      if (!img) {
        throw std::logic_error("endomorphic image missing from free algebra");
      }
      out[e] = *img;
    }
    return out;
  }

  BinRel FreeAlgebra::kernel(std::span<std::size_t const> map) const {
    auto                       img = endomorphism(map);
    std::vector<std::uint32_t> labels(img.begin(), img.end());
    BinRel                     r = BinRel::from_labels(labels);
    r.set_kind_hint(RelKind::Congruence);
    return r;
  }

  FiniteAlgebra FreeAlgebra::as_algebra(std::size_t cap) const {
    std::vector<std::vector<Element>> tables;
    std::size_t                       total = 0;
    for (std::size_t op = 0; op < _base.num_ops(); ++op) {
      std::size_t const r   = _base.signature()[op].arity;
      std::size_t const len = checked_pow(size(), r, cap);
      total += len;
      if (total > cap) {
        throw CapExceeded("induced operation tables exceed "
                          + std::to_string(cap) + " entries");
      }
      std::vector<Element>     t(len);
      std::vector<std::size_t> args(r);
      for (std::size_t idx = 0; idx < len; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = r; i-- > 0;) {
          args[i] = rest % size();
          rest /= size();
        }
        t[idx] = static_cast<Element>(apply(op, args));
      }
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra(_base.name() + "_free" + std::to_string(_g), size(),
                         _base.signature(), std::move(tables));
  }

  ////////////////////////////////////////////////////////////////////////////
  // Construction
  ////////////////////////////////////////////////////////////////////////////

  FreeAlgebra build_free(FiniteAlgebra const& a,
                         std::size_t          g,
                         FreeOptions const&   opts) {
    if (g == 0) {
      throw std::invalid_argument("free algebra needs at least one generator");
    }
    if (a.size() > 256) {
      throw std::invalid_argument("free algebra base must have <= 256 elements");
    }
    std::size_t const n = a.size();
    std::size_t const N = checked_pow(n, g, opts.cap_entries);

    FreeAlgebra f(a);
    f._g = g;

    // Columns.
    f._endos = opts.dedup_columns ? endomorphisms(a)
                                  : std::vector<std::vector<std::uint8_t>>{};
    if (f._endos.empty()) {
      std::vector<std::uint8_t> id(n);
      for (std::size_t x = 0; x < n; ++x) {
        id[x] = static_cast<std::uint8_t>(x);
      }
      f._endos.push_back(id);
    }
    f._col_of.assign(N, empty_slot);
    f._endo_of.assign(N, 0);
    for (std::size_t t = 0; t < N; ++t) {
      if (f._col_of[t] != empty_slot) {
        continue;
      }
      std::uint32_t col = static_cast<std::uint32_t>(f._kept.size());
      f._kept.push_back(static_cast<std::uint32_t>(t));
      f._col_of[t] = col;
      for (std::size_t e = 1; e < f._endos.size(); ++e) {
        std::size_t u = 0;
        for (std::size_t i = 0; i < g; ++i) {
          u = u * n + f._endos[e][digit(t, i, g, n)];
        }
        if (u > t && f._col_of[u] == empty_slot) {
          f._col_of[u]  = col;
          f._endo_of[u] = static_cast<std::uint32_t>(e);
        }
      }
    }
    std::size_t const cols   = f._kept.size();
    std::size_t const stride = (cols + 7) / 8 * 8;
    f._cols                  = cols;
    f._stride                = stride;

    auto check_entries = [&](std::size_t elements) {
      if (elements * cols > opts.cap_entries) {
        throw CapExceeded("free algebra on " + std::to_string(g)
                          + " generators exceeds " + std::to_string(opts.cap_entries)
                          + " vector entries (reached "
                          + std::to_string(elements - 1) + " elements)");
      }
    };
    auto add = [&](std::uint8_t const* v, FreeAlgebra::Witness w) {
      check_entries(f.size() + 1);
      std::uint32_t e = static_cast<std::uint32_t>(f.size());
      f._data.insert(f._data.end(), v, v + stride);
      f._witness.push_back(std::move(w));
      if (2 * f.size() > f._slots.size()) {
        f.rehash(std::bit_ceil(std::max<std::size_t>(64, 4 * f.size())));
      } else {
        f.insert_index(e);
      }
      return e;
    };

    std::vector<std::uint8_t> v(stride, 0);
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t c = 0; c < cols; ++c) {
        v[c] = static_cast<std::uint8_t>(digit(f._kept[c], i, g, n));
      }
      auto e = f.find_padded(v.data());
      if (!e) {
        e = add(v.data(), {FreeAlgebra::no_op, {static_cast<std::uint32_t>(i)}});
      }
      f._gens.push_back(*e);
    }
    std::vector<OpInfo> ops;
    for (std::size_t op = 0; op < a.num_ops(); ++op) {
      std::size_t r = a.signature()[op].arity;
      if (r == 0) {
        std::fill(v.begin(), v.begin() + cols,
                  static_cast<std::uint8_t>(a.table(op)[0]));
        if (!f.find_padded(v.data())) {
          add(v.data(), {static_cast<std::uint32_t>(op), {}});
        }
        continue;
      }
      ops.push_back({op, r, a.is_commutative(op), a.is_idempotent(op)});
    }

    // Byte tables indexed by bit-packed arguments.
    unsigned shift = 0;
    while ((std::size_t(1) << shift) < n) {
      ++shift;
    }
    std::vector<std::vector<std::uint8_t>> packed(a.num_ops());
    for (auto const& o : ops) {
      if (shift * o.arity > 16) {
        continue;
      }
      auto& pt = packed[o.index];
      pt.assign(std::size_t(1) << (shift * o.arity), 0);
      auto t = a.table(o.index);
      for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::size_t rest = idx, key = 0;
        for (std::size_t k = 0; k < o.arity; ++k) {
          key |= (rest % n) << (shift * k);
          rest /= n;
        }
        pt[key] = static_cast<std::uint8_t>(t[idx]);
      }
    }

    auto compute = [&](OpInfo const& o, std::uint32_t const* args,
                       std::uint8_t* out) {
      std::uint8_t const* d  = f._data.data();
      auto const&         pt = packed[o.index];
      if (o.arity == 2 && !pt.empty()) {
        std::uint8_t const* x = d + args[0] * stride;
        std::uint8_t const* y = d + args[1] * stride;
        for (std::size_t c = 0; c < cols; ++c) {
          out[c] = pt[(x[c] << shift) | y[c]];
        }
        return;
      }
      if (o.arity == 3 && !pt.empty()) {
        std::uint8_t const* x = d + args[0] * stride;
        std::uint8_t const* y = d + args[1] * stride;
        std::uint8_t const* z = d + args[2] * stride;
        for (std::size_t c = 0; c < cols; ++c) {
          out[c] = pt[(((x[c] << shift) | y[c]) << shift) | z[c]];
        }
        return;
      }
      auto t = a.table(o.index);
      for (std::size_t c = 0; c < cols; ++c) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < o.arity; ++k) {
          idx = idx * n + d[args[k] * stride + c];
        }
        out[c] = static_cast<std::uint8_t>(t[idx]);
      }
    };

    double      work = 0;
    std::size_t old  = 0;
    while (old < f.size()) {
      std::size_t const cur = f.size();
      double            level = 0;
      for (auto const& o : ops) {
        double tuples = std::pow(double(cur), double(o.arity))
                        - std::pow(double(old), double(o.arity));
        level += (o.commutative ? tuples / 2 : tuples) * double(cols);
      }
      work += level;
      if (work > opts.cap_work) {
        throw CapExceeded("free algebra on " + std::to_string(g)
                          + " generators exceeds the work cap ("
                          + std::to_string(cur) + " elements reached)");
      }

      for (auto const& o : ops) {
        if (!opts.parallel) {
          // Reference path: insert as discovered.
          std::vector<std::uint32_t> args;
          for (std::size_t a0 = 0; a0 < cur; ++a0) {
            enumerate_block(a0, o.arity, old, cur, o.commutative, o.idempotent,
                            args, [&](std::vector<std::uint32_t> const& xs) {
                              compute(o, xs.data(), v.data());
                              if (!f.find_padded(v.data())) {
                                add(v.data(), {static_cast<std::uint32_t>(o.index), xs});
                              }
                            });
          }
          continue;
        }

        // Each block filters against the elements known before this
        // operation; blocks are merged in order so the result matches the
        // reference path exactly.
        struct Block {
          std::vector<std::uint8_t>  vecs;
          std::vector<std::uint32_t> args;
        };
        std::vector<Block> blocks(cur);
        std::size_t const  r = o.arity;
#pragma omp parallel for schedule(dynamic, 1)
        for (std::size_t a0 = 0; a0 < cur; ++a0) {
          Block&                     b = blocks[a0];
          std::vector<std::uint32_t> args;
          std::vector<std::uint8_t>  tmp(stride, 0);
          auto hasher = [&b, stride](std::uint32_t i) {
            return hash_words(b.vecs.data() + i * stride, stride);
          };
          auto eq = [&b, stride](std::uint32_t i, std::uint32_t j) {
            return equal_words(b.vecs.data() + i * stride,
                               b.vecs.data() + j * stride, stride);
          };
          std::unordered_set<std::uint32_t, decltype(hasher), decltype(eq)>
              local(16, hasher, eq);
          enumerate_block(a0, r, old, cur, o.commutative, o.idempotent, args,
                          [&](std::vector<std::uint32_t> const& xs) {
                            compute(o, xs.data(), tmp.data());
                            if (f.find_padded(tmp.data())) {
                              return;
                            }
                            auto id = static_cast<std::uint32_t>(b.vecs.size() / stride);
                            b.vecs.insert(b.vecs.end(), tmp.begin(), tmp.end());
                            if (local.insert(id).second) {
                              b.args.insert(b.args.end(), xs.begin(), xs.end());
                            } else {
                              b.vecs.resize(b.vecs.size() - stride);
                            }
                          });
        }
        for (auto& b : blocks) {
          std::size_t count = b.args.size() / r;
          for (std::size_t k = 0; k < count; ++k) {
            std::uint8_t const* vec = b.vecs.data() + k * stride;
            if (!f.find_padded(vec)) {
              add(vec, {static_cast<std::uint32_t>(o.index),
                        std::vector<std::uint32_t>(b.args.begin() + k * r,
                                                   b.args.begin() + (k + 1) * r)});
            }
          }
          b = Block{};
        }
      }
      old = cur;
    }
    return f;
  }

}  // namespace cmod

namespace cmod {

  FiniteAlgebra quotient(FiniteAlgebra const& a, BinRel const& theta) {
    auto const                 labels = class_labels(theta);
    std::size_t const          n      = a.size();
    std::vector<std::uint32_t> index(n, UINT32_MAX);
    std::vector<Element>       rep;
    for (std::size_t x = 0; x < n; ++x) {
      if (labels[x] == x) {
        index[x] = static_cast<std::uint32_t>(rep.size());
        rep.push_back(static_cast<Element>(x));
      }
    }
    std::size_t const                 q = rep.size();
    std::vector<std::vector<Element>> tables;
    for (std::size_t op = 0; op < a.num_ops(); ++op) {
      std::size_t const    r   = a.signature()[op].arity;
      std::size_t const    len = checked_pow(q, r, SIZE_MAX);
      std::vector<Element> t(len), args(r);
      for (std::size_t idx = 0; idx < len; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = r; i-- > 0;) {
          args[i] = rep[rest % q];
          rest /= q;
        }
        t[idx] = static_cast<Element>(index[labels[a.apply(op, args)]]);
      }
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra(a.name() + "_q", q, a.signature(), std::move(tables));
  }

  bool embeds(FiniteAlgebra const& s, FiniteAlgebra const& t) {
    if (s.signature() != t.signature() || s.size() > t.size()) {
      return false;
    }
    std::size_t const    n = s.size();
    std::vector<Element> h(n);
    std::vector<bool>    used(t.size(), false);
    // every operation entry whose arguments are all mapped already
    auto consistent = [&](std::size_t upto) {
      std::vector<Element> args, img;
      for (std::size_t op = 0; op < s.num_ops(); ++op) {
        std::size_t const r   = s.signature()[op].arity;
        std::size_t const len = checked_pow(upto, r, SIZE_MAX);
        args.assign(r, 0);
        img.assign(r, 0);
        for (std::size_t idx = 0; idx < len; ++idx) {
          std::size_t rest = idx;
          for (std::size_t i = r; i-- > 0;) {
            args[i] = static_cast<Element>(rest % upto);
            img[i]  = h[args[i]];
            rest /= upto;
          }
          Element v = s.apply(op, args);
          if (v < upto && t.apply(op, img) != h[v]) {
            return false;
          }
        }
      }
      return true;
    };
    auto rec = [&](auto&& self, std::size_t x) -> bool {
      if (x == n) {
        return consistent(n);
      }
      for (std::size_t y = 0; y < t.size(); ++y) {
        if (used[y]) {
          continue;
        }
        h[x]    = static_cast<Element>(y);
        used[y] = true;
        if (consistent(x + 1) && self(self, x + 1)) {
          return true;
        }
        used[y] = false;
      }
      return false;
    };
    return rec(rec, 0);
  }

  FiniteAlgebra variety_base(FiniteAlgebra const& a) {
    if (a.size() <= 2 || a.size() > 12) {
      return a;
    }
    std::vector<BinRel> cons;
    try {
      cons = all_congruences(a);
    } catch (CapExceeded const&) {
      return a;
    }
    std::vector<FiniteAlgebra> irreducible;
    for (auto const& theta : cons) {
      if (theta.is_full()) {
        continue;
      }
      std::optional<BinRel> above;
      for (auto const& psi : cons) {
        if (psi != theta && theta.subset_of(psi)) {
          above = above ? meet(*above, psi) : psi;
        }
      }
      if (!above || *above != theta) {
        irreducible.push_back(quotient(a, theta));
      }
    }
    std::sort(irreducible.begin(), irreducible.end(),
              [](auto const& x, auto const& y) { return x.size() < y.size(); });
    for (auto const& q : irreducible) {
      if (q.size() >= a.size()) {
        break;
      }
      bool all = std::all_of(irreducible.begin(), irreducible.end(),
                             [&](auto const& r) { return embeds(r, q); });
      if (all) {
        return q;
      }
    }
    return a;
  }

  Subpower generated_subpower(FiniteAlgebra const&                     a,
                              std::vector<std::vector<Element>> const& gens,
                              std::size_t                              max_size,
                              std::size_t                              cap) {
    std::size_t const c = gens.empty() ? 0 : gens.front().size();
    std::vector<std::vector<Element>>                elems;
    std::map<std::vector<Element>, std::size_t>      index;
    std::vector<std::size_t>                         gen_idx;
    auto add = [&](std::vector<Element> v) {
      auto [it, fresh] = index.emplace(std::move(v), elems.size());
      if (fresh) {
        if (elems.size() == max_size) {
          throw CapExceeded("subpower exceeds " + std::to_string(max_size)
                            + " elements");
        }
        elems.push_back(it->first);
      }
      return it->second;
    };
    for (auto const& g : gens) {
      if (g.size() != c) {
        throw std::invalid_argument("generators of different lengths");
      }
      gen_idx.push_back(add(g));
    }

    // semi-naive closure: each round uses at least one element of the last
    std::size_t done = 0;
    std::vector<Element> args, out(c);
    std::vector<std::size_t> pick;
    while (done < elems.size() || done == 0) {
      std::size_t const size = elems.size();
      for (std::size_t op = 0; op < a.num_ops(); ++op) {
        std::size_t const r = a.signature()[op].arity;
        if (r == 0 && done > 0) {
          continue;
        }
        std::size_t const total = checked_pow(size, r, cap);
        pick.assign(r, 0);
        args.resize(r);
        for (std::size_t code = 0; code < total; ++code) {
          std::size_t rest  = code;
          bool        fresh = r == 0;
          for (std::size_t i = r; i-- > 0;) {
            pick[i] = rest % size;
            rest /= size;
            fresh |= pick[i] >= done;
          }
          if (!fresh) {
            continue;
          }
          for (std::size_t col = 0; col < c; ++col) {
            for (std::size_t i = 0; i < r; ++i) {
              args[i] = elems[pick[i]][col];
            }
            out[col] = a.apply(op, args);
          }
          add(out);
        }
      }
      done = size;
      if (size == 0) {
        break;
      }
    }

    std::size_t const                 n = elems.size();
    std::vector<std::vector<Element>> tables;
    for (std::size_t op = 0; op < a.num_ops(); ++op) {
      std::size_t const    r   = a.signature()[op].arity;
      std::size_t const    len = checked_pow(n, r, cap);
      std::vector<Element> t(len);
      args.resize(r);
      pick.assign(r, 0);
      for (std::size_t idx = 0; idx < len; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = r; i-- > 0;) {
          pick[i] = rest % n;
          rest /= n;
        }
        for (std::size_t col = 0; col < c; ++col) {
          for (std::size_t i = 0; i < r; ++i) {
            args[i] = elems[pick[i]][col];
          }
          out[col] = a.apply(op, args);
        }
        t[idx] = static_cast<Element>(index.at(out));
      }
      tables.push_back(std::move(t));
    }
    return {FiniteAlgebra(a.name() + "_sub", n, a.signature(), std::move(tables)),
            std::move(gen_idx)};
  }

}  // namespace cmod
