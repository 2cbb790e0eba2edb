#include "cmod/relation.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cmod/error.hpp"
#include "cmod/kernels.hpp"

namespace cmod {

  char const* to_string(RelKind k) noexcept {
    switch (k) {
      case RelKind::Plain:
        return "plain";
      case RelKind::Admissible:
        return "admissible";
      case RelKind::Tolerance:
        return "tolerance";
      case RelKind::Congruence:
        return "congruence";
    }
    return "?";
  }

  std::size_t ElementSet::count() const noexcept {
    std::size_t c = 0;
    for (auto w : _words) {
      c += std::popcount(w);
    }
    return c;
  }

  std::vector<Element> ElementSet::elements() const {
    std::vector<Element> out;
    for (std::size_t w = 0; w < _words.size(); ++w) {
      std::uint64_t bits = _words[w];
      while (bits != 0) {
        out.push_back(static_cast<Element>(w * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // BinRel
  ////////////////////////////////////////////////////////////////////////////

  BinRel::BinRel(std::size_t n)
      : _n(n), _wpr((n + 63) / 64), _bits(n * ((n + 63) / 64), 0) {
    for (std::size_t a = 0; a < n; ++a) {
      insert(a, a);
    }
  }

  BinRel BinRel::full(std::size_t n) {
    BinRel r(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        r.insert(a, b);
      }
    }
    return r;
  }

  BinRel BinRel::from_pairs(std::size_t n, PairSet const& pairs) {
    BinRel r(n);
    for (auto [a, b] : pairs) {
      if (a >= n || b >= n) {
        throw std::out_of_range("pair entry out of range");
      }
      r.insert(a, b);
    }
    return r;
  }

  BinRel BinRel::from_labels(std::span<std::uint32_t const> labels) {
    std::size_t const n = labels.size();
    BinRel            r(n);
    std::map<std::uint32_t, ElementSet> classes;
    for (std::size_t a = 0; a < n; ++a) {
      auto it = classes.try_emplace(labels[a], n).first;
      it->second.insert(a);
    }
    for (std::size_t a = 0; a < n; ++a) {
      auto const& cls = classes.at(labels[a]).words();
      std::copy(cls.begin(), cls.end(), r.row(a).begin());
    }
    return r;
  }

  BinRel BinRel::from_rows(std::vector<std::string> const& rows) {
    std::size_t const n = rows.size();
    BinRel            r(n);
    for (std::size_t a = 0; a < n; ++a) {
      if (rows[a].size() != n) {
        throw std::invalid_argument("relation row has wrong length");
      }
      for (std::size_t b = 0; b < n; ++b) {
        char c = rows[a][b];
        if (c == '1') {
          r.insert(a, b);
        } else if (c != '0') {
          throw std::invalid_argument("relation rows must be 0/1");
        } else if (a == b) {
          throw std::invalid_argument("relation must be reflexive");
        }
      }
    }
    return r;
  }

  std::size_t BinRel::count() const noexcept {
    std::size_t c = 0;
    for (auto w : _bits) {
      c += std::popcount(w);
    }
    return c;
  }

  PairSet BinRel::pairs() const {
    PairSet out;
    for (std::size_t a = 0; a < _n; ++a) {
      for (std::size_t w = 0; w < _wpr; ++w) {
        std::uint64_t bits = _bits[a * _wpr + w];
        while (bits != 0) {
          out.emplace_back(static_cast<Element>(a),
                           static_cast<Element>(w * 64 + std::countr_zero(bits)));
          bits &= bits - 1;
        }
      }
    }
    return out;
  }

  bool BinRel::is_symmetric() const {
    return converse(*this) == *this;
  }

  bool BinRel::is_transitive() const {
    return compose(*this, *this) == *this;
  }

  bool BinRel::is_identity() const {
    return *this == BinRel(_n);
  }

  bool BinRel::is_full() const {
    return count() == _n * _n;
  }

  bool BinRel::subset_of(BinRel const& other) const {
    if (_n != other._n) {
      throw std::invalid_argument("relations on different universes");
    }
    for (std::size_t i = 0; i < _bits.size(); ++i) {
      if (_bits[i] & ~other._bits[i]) {
        return false;
      }
    }
    return true;
  }

  std::vector<std::string> BinRel::to_rows() const {
    std::vector<std::string> out(_n, std::string(_n, '0'));
    for (std::size_t a = 0; a < _n; ++a) {
      for (std::size_t b = 0; b < _n; ++b) {
        if (contains(a, b)) {
          out[a][b] = '1';
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Calculus
  ////////////////////////////////////////////////////////////////////////////

  namespace {
    void check_same(BinRel const& r, BinRel const& s) {
      if (r.size() != s.size()) {
        throw std::invalid_argument("relation size mismatch: "
                                    + std::to_string(r.size()) + " vs "
                                    + std::to_string(s.size()));
      }
    }
  }  // namespace

  BinRel compose(BinRel const& r, BinRel const& s) {
    check_same(r, s);
    BinRel out(r.size());
    kernels::compose(r.size(), r.words_per_row(), r.data(), s.data(),
                     out.data());
    return out;
  }

  BinRel meet(BinRel const& r, BinRel const& s) {
    check_same(r, s);
    BinRel out(r.size());
    auto   o = out.data();
    auto   a = r.data();
    auto   b = s.data();
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] = a[i] & b[i];
    }
    return out;
  }

  BinRel rel_union(BinRel const& r, BinRel const& s) {
    check_same(r, s);
    BinRel out(r.size());
    auto   o = out.data();
    auto   a = r.data();
    auto   b = s.data();
    for (std::size_t i = 0; i < o.size(); ++i) {
      o[i] = a[i] | b[i];
    }
    return out;
  }

  BinRel converse(BinRel const& r) {
    BinRel out(r.size());
    kernels::transpose(r.size(), r.words_per_row(), r.data(), out.data());
    if (r.kind_hint() && *r.kind_hint() != RelKind::Admissible) {
      out.set_kind_hint(r.kind_hint());
    }
    return out;
  }

  BinRel alt(BinRel const& r, BinRel const& s, std::size_t m) {
    check_same(r, s);
    if (m == 0) {
      throw std::invalid_argument("alt requires at least one factor");
    }
    BinRel out = r;
    for (std::size_t i = 1; i < m; ++i) {
      out = compose(out, i % 2 == 1 ? s : r);
    }
    out.set_kind_hint(std::nullopt);
    if (m == 1) {
      out.set_kind_hint(r.kind_hint());
    }
    return out;
  }

  BinRel power(BinRel const& r, std::size_t h) {
    return alt(r, r, h);
  }

  ElementSet image(BinRel const& r, ElementSet const& set) {
    if (set.universe() != r.size()) {
      throw std::invalid_argument("set and relation on different universes");
    }
    ElementSet out(r.size());
    auto       dst = out.words();
    auto       src = set.words();
    for (std::size_t w = 0; w < src.size(); ++w) {
      std::uint64_t bits = src[w];
      while (bits != 0) {
        auto row = r.row(w * 64 + std::countr_zero(bits));
        for (std::size_t k = 0; k < dst.size(); ++k) {
          dst[k] |= row[k];
        }
        bits &= bits - 1;
      }
    }
    return out;
  }

  ElementSet singleton(std::size_t n, std::size_t a) {
    ElementSet s(n);
    s.insert(a);
    return s;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Compatibility
  ////////////////////////////////////////////////////////////////////////////

  namespace {

    // Every r-tuple of pairs from `pairs` with at least one index >= `from`
    // is mapped coordinatewise through each operation; `visit` receives the
    // resulting pair and returns false to stop.
    template <typename Visit>
    bool for_each_image(FiniteAlgebra const& a,
                        PairSet const&       pairs,
                        std::size_t          from,
                        Visit&&              visit) {
      std::size_t const    cur = pairs.size();
      std::vector<Element> lhs, rhs;
      std::vector<std::size_t> idx;
      for (std::size_t op = 0; op < a.num_ops(); ++op) {
        std::size_t const r = a.signature()[op].arity;
        if (r == 0 || cur == 0) {
          continue;
        }
        lhs.assign(r, 0);
        rhs.assign(r, 0);
        idx.assign(r, 0);
        while (true) {
          bool fresh = false;
          for (std::size_t i = 0; i < r; ++i) {
            fresh = fresh || idx[i] >= from;
          }
          if (fresh) {
            for (std::size_t i = 0; i < r; ++i) {
              lhs[i] = pairs[idx[i]].first;
              rhs[i] = pairs[idx[i]].second;
            }
            if (!visit(Pair{a.apply(op, lhs), a.apply(op, rhs)})) {
              return false;
            }
          }
          std::size_t i = r;
          while (i > 0) {
            --i;
            if (++idx[i] < cur) {
              break;
            }
            idx[i] = 0;
            if (i == 0) {
              i = r + 1;
              break;
            }
          }
          if (i == r + 1) {
            break;
          }
        }
      }
      return true;
    }

    // Compatibility of an equivalence relation reduces to compatibility with
    // basic translations x -> f(c1, .., x, .., cr).
    bool translation_compatible(FiniteAlgebra const& a, BinRel const& r) {
      std::size_t const    n = a.size();
      std::vector<Element> args;
      for (auto [x, y] : r.pairs()) {
        if (x >= y) {
          continue;
        }
        for (std::size_t op = 0; op < a.num_ops(); ++op) {
          std::size_t const ar = a.signature()[op].arity;
          if (ar == 0) {
            continue;
          }
          std::size_t const others = checked_pow(n, ar - 1, std::size_t(1) << 40);
          args.assign(ar, 0);
          for (std::size_t pos = 0; pos < ar; ++pos) {
            for (std::size_t c = 0; c < others; ++c) {
              std::size_t rest = c;
              for (std::size_t i = ar; i-- > 0;) {
                if (i == pos) {
                  continue;
                }
                args[i] = static_cast<Element>(rest % n);
                rest /= n;
              }
              args[pos]   = x;
              Element fx  = a.apply(op, args);
              args[pos]   = y;
              Element fy  = a.apply(op, args);
              if (!r.contains(fx, fy)) {
                return false;
              }
            }
          }
        }
      }
      return true;
    }

  }  // namespace

  bool is_compatible(FiniteAlgebra const& a, BinRel const& r, RelKind kind) {
    if (r.size() != a.size()) {
      throw std::invalid_argument("relation and algebra sizes differ");
    }
    if (kind == RelKind::Plain) {
      return true;
    }
    if (kind != RelKind::Admissible && !r.is_symmetric()) {
      return false;
    }
    if (kind == RelKind::Congruence) {
      return r.is_transitive() && translation_compatible(a, r);
    }
    PairSet const pairs = r.pairs();
    return for_each_image(a, pairs, 0, [&r](Pair p) {
      return r.contains(p.first, p.second);
    });
  }

  BinRel with_verified_kind(FiniteAlgebra const& a, BinRel r, RelKind kind) {
    if (!is_compatible(a, r, kind)) {
      throw std::invalid_argument(std::string("relation is not a ")
                                  + to_string(kind));
    }
    r.set_kind_hint(kind);
    return r;
  }

  ////////////////////////////////////////////////////////////////////////////
  // Generation
  ////////////////////////////////////////////////////////////////////////////

  namespace {

    struct UnionFind {
      explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
      }
      std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x         = parent[x];
        }
        return x;
      }
      // Returns true when two classes were merged.
      bool unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) {
          return false;
        }
        if (y < x) {
          std::swap(x, y);
        }
        parent[y] = x;
        return true;
      }
      std::vector<std::uint32_t> labels() {
        std::vector<std::uint32_t> out(parent.size());
        for (std::size_t i = 0; i < parent.size(); ++i) {
          out[i] = find(static_cast<std::uint32_t>(i));
        }
        return out;
      }
      std::vector<std::uint32_t> parent;
    };

    BinRel generate_congruence(FiniteAlgebra const& a, PairSet const& seed) {
      std::size_t const n = a.size();
      UnionFind         uf(n);
      PairSet           work;
      for (auto [x, y] : seed) {
        if (uf.unite(x, y)) {
          work.emplace_back(x, y);
        }
      }
      std::vector<Element> args;
      while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        for (std::size_t op = 0; op < a.num_ops(); ++op) {
          std::size_t const ar = a.signature()[op].arity;
          if (ar == 0) {
            continue;
          }
          std::size_t const others = checked_pow(n, ar - 1, std::size_t(1) << 40);
          args.assign(ar, 0);
          for (std::size_t pos = 0; pos < ar; ++pos) {
            for (std::size_t c = 0; c < others; ++c) {
              std::size_t rest = c;
              for (std::size_t i = ar; i-- > 0;) {
                if (i == pos) {
                  continue;
                }
                args[i] = static_cast<Element>(rest % n);
                rest /= n;
              }
              args[pos]  = x;
              Element fx = a.apply(op, args);
              args[pos]  = y;
              Element fy = a.apply(op, args);
              if (uf.unite(fx, fy)) {
                work.emplace_back(fx, fy);
              }
            }
          }
        }
      }
      auto   labels = uf.labels();
      BinRel out    = BinRel::from_labels(labels);
      out.set_kind_hint(RelKind::Congruence);
      return out;
    }

    // Subuniverse of A x A generated by the given pairs and the diagonal.
    BinRel generate_subpower(FiniteAlgebra const& a, PairSet pairs) {
      std::size_t const n = a.size();
      BinRel            rel(n);
      PairSet           list;
      for (std::size_t x = 0; x < n; ++x) {
        list.emplace_back(static_cast<Element>(x), static_cast<Element>(x));
      }
      for (auto p : pairs) {
        if (!rel.contains(p.first, p.second)) {
          rel.insert(p.first, p.second);
          list.push_back(p);
        }
      }
      std::size_t from = 0;
      while (from < list.size()) {
        std::size_t const cur = list.size();
        PairSet const     snapshot(list.begin(), list.end());
        for_each_image(a, snapshot, from, [&](Pair p) {
          if (!rel.contains(p.first, p.second)) {
            rel.insert(p.first, p.second);
            list.push_back(p);
          }
          return true;
        });
        from = cur;
      }
      return rel;
    }

  }  // namespace

  BinRel generate(FiniteAlgebra const& a, PairSet const& seed, RelKind kind) {
    for (auto [x, y] : seed) {
      if (x >= a.size() || y >= a.size()) {
        throw std::out_of_range("seed pair out of range");
      }
    }
    switch (kind) {
      case RelKind::Plain: {
        BinRel r = BinRel::from_pairs(a.size(), seed);
        return r.set_kind_hint(RelKind::Plain);
      }
      case RelKind::Admissible: {
        BinRel r = generate_subpower(a, seed);
        return r.set_kind_hint(RelKind::Admissible);
      }
      case RelKind::Tolerance: {
        PairSet sym = seed;
        for (auto [x, y] : seed) {
          sym.emplace_back(y, x);
        }
        BinRel r = generate_subpower(a, sym);
        return r.set_kind_hint(RelKind::Tolerance);
      }
      case RelKind::Congruence:
        return generate_congruence(a, seed);
    }
    throw std::logic_error("unreachable");
  }

  std::vector<std::uint32_t> class_labels(BinRel const& eq) {
    std::vector<std::uint32_t> out(eq.size());
    for (std::size_t a = 0; a < eq.size(); ++a) {
      auto row = eq.row(a);
      for (std::size_t w = 0; w < row.size(); ++w) {
        if (row[w] != 0) {
          out[a] = static_cast<std::uint32_t>(w * 64 + std::countr_zero(row[w]));
          break;
        }
      }
    }
    return out;
  }

  BinRel cong_join(BinRel const& alpha, BinRel const& beta) {
    check_same(alpha, beta);
    for (BinRel const* r : {&alpha, &beta}) {
      if (!r->is_symmetric() || !r->is_transitive()) {
        throw std::invalid_argument("cong_join requires congruences");
      }
    }
    UnionFind uf(alpha.size());
    for (BinRel const* r : {&alpha, &beta}) {
      auto labels = class_labels(*r);
      for (std::size_t x = 0; x < labels.size(); ++x) {
        uf.unite(static_cast<std::uint32_t>(x), labels[x]);
      }
    }
    auto   labels = uf.labels();
    BinRel out    = BinRel::from_labels(labels);
    if (alpha.kind_hint() == RelKind::Congruence
        && beta.kind_hint() == RelKind::Congruence) {
      out.set_kind_hint(RelKind::Congruence);
    }
    return out;
  }

  std::vector<BinRel> all_congruences(FiniteAlgebra const& a, std::size_t cap) {
    if (a.size() > cap) {
      throw CapExceeded("all_congruences: algebra size "
                        + std::to_string(a.size()) + " exceeds cap "
                        + std::to_string(cap));
    }
    std::size_t const n = a.size();
    std::map<std::vector<std::uint64_t>, std::size_t> seen;
    std::vector<BinRel>                               out;
    auto add = [&](BinRel r) {
      std::vector<std::uint64_t> key(r.data().begin(), r.data().end());
      if (seen.emplace(std::move(key), out.size()).second) {
        r.set_kind_hint(RelKind::Congruence);
        out.push_back(std::move(r));
        return true;
      }
      return false;
    };
    add(BinRel(n));
    std::vector<std::size_t> principal;
    for (Element x = 0; x < n; ++x) {
      for (Element y = x + 1; y < n; ++y) {
        add(generate(a, {{x, y}}, RelKind::Congruence));
      }
    }
    // Every congruence is a join of principal ones; close under join.
    std::size_t const nprincipal = out.size();
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 1; j < nprincipal; ++j) {
        add(cong_join(out[i], out[j]));
      }
    }
    std::sort(out.begin(), out.end(), [](BinRel const& x, BinRel const& y) {
      auto cx = x.count();
      auto cy = y.count();
      if (cx != cy) {
        return cx < cy;
      }
      return std::lexicographical_compare(x.data().begin(), x.data().end(),
                                          y.data().begin(), y.data().end());
    });
    return out;
  }

}  // namespace cmod
