#include "cmod/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "cmod/bounds.hpp"
#include "cmod/catalog.hpp"
#include "cmod/error.hpp"
#include "cmod/free_algebra.hpp"
#include "cmod/identity_engine.hpp"
#include "cmod/report.hpp"
#include "cmod/term_chain.hpp"

namespace cmod::cli {

  namespace {
    using J = nlohmann::ordered_json;

    struct RunConfig {
      bool        json    = false;
      int         threads = 0;
      std::size_t cap_entries  = FreeOptions{}.cap_entries;
      double      cap_work     = FreeOptions{}.cap_work;
      std::size_t spectrum_cap = EngineOptions{}.spectrum_cap;
      std::size_t enum_size    = EngineOptions{}.enum_size;

      EngineOptions engine() const {
        EngineOptions o;
        o.free.cap_entries = cap_entries;
        o.free.cap_work    = cap_work;
        o.spectrum_cap     = spectrum_cap;
        o.enum_size        = enum_size;
        return o;
      }
    };

    struct UsageError : std::runtime_error {
      using std::runtime_error::runtime_error;
    };

    std::string stem(std::string const& path) {
      return std::filesystem::path(path).stem().string();
    }

    std::string read_file(std::string const& path) {
      std::ifstream in(path);
      if (!in) {
        throw UsageError("cannot read " + path);
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }

    std::string measure_str(Measure const& m) {
      return m.str();
    }

    J measure_json(Measure const& m) {
      if (m.is_known()) {
        return m.value;
      }
      if (m.kind == Measure::Kind::Unknown) {
        return nullptr;
      }
      return m.str();
    }

    // alg info
    int alg_info(RunConfig const& cfg, std::string const& file,
                 std::ostream& out) {
      FiniteAlgebra a    = load_algebra(file);
      FiniteAlgebra base = variety_base(a);
      std::optional<std::size_t> ncon;
      try {
        ncon = all_congruences(a, 12).size();
      } catch (CapExceeded const&) {
      }
      if (cfg.json) {
        J j;
        j["name"] = a.name();
        j["size"] = a.size();
        j["operations"] = J::array();
        for (std::size_t i = 0; i < a.num_ops(); ++i) {
          j["operations"].push_back({{"name", a.signature()[i].name},
                                     {"arity", a.signature()[i].arity},
                                     {"idempotent", a.is_idempotent(i)}});
        }
        j["congruences"] = ncon ? J(*ncon) : J(nullptr);
        j["varietyBase"] = base.size();
        out << j.dump(2) << "\n";
      } else {
        out << a.name() << ": " << a.size() << " elements\n";
        for (std::size_t i = 0; i < a.num_ops(); ++i) {
          out << "  " << a.signature()[i].name << "/" << a.signature()[i].arity
              << (a.is_idempotent(i) ? " idempotent" : "") << "\n";
        }
        out << "congruences: " << (ncon ? std::to_string(*ncon) : "too many")
            << "\n";
        out << "variety base: " << base.size() << " elements\n";
      }
      return Ok;
    }

    int free_cmd(RunConfig const& cfg, std::string const& file, std::size_t g,
                 bool dump, std::ostream& out) {
      FiniteAlgebra a = load_algebra(file);
      FreeAlgebra   f = build_free(a, g, cfg.engine().free);
      if (cfg.json) {
        J j;
        j["algebra"]    = a.name();
        j["generators"] = g;
        j["size"]       = f.size();
        j["tuples"]     = f.tuple_count();
        j["columns"]    = f.columns();
        if (dump) {
          j["terms"] = J::array();
          for (std::size_t e = 0; e < f.size(); ++e) {
            j["terms"].push_back(to_prefix(f.term_of(e)));
          }
        }
        out << j.dump(2) << "\n";
      } else {
        out << "F(" << g << ") of " << a.name() << ": " << f.size()
            << " elements, " << f.tuple_count() << " tuples, " << f.columns()
            << " stored columns\n";
        if (dump) {
          for (std::size_t e = 0; e < f.size(); ++e) {
            out << e << " " << to_prefix(f.term_of(e)) << "\n";
          }
        }
      }
      return Ok;
    }

    int terms_cmd(RunConfig const& cfg, std::string const& file,
                  std::string const& scheme, std::size_t max,
                  std::ostream& out) {
      FiniteAlgebra            a  = load_algebra(file);
      FreeOptions              fo = cfg.engine().free;
      std::optional<TermChain> c;
      if (scheme == "day") {
        c = search_day(a, max, fo);
      } else if (scheme == "gumm") {
        c = search_gumm(a, max, fo);
      } else if (scheme == "jonsson" || scheme == "alvin") {
        c = search_jonsson(a, max, scheme == "alvin", fo);
      } else {
        throw UsageError("unknown scheme " + scheme);
      }
      std::optional<ChainVerdict> v;
      if (c) {
        v = verify_chain(a, *c);
      }
      if (cfg.json) {
        J j;
        j["algebra"] = a.name();
        j["scheme"]  = scheme;
        j["max"]     = max;
        j["found"]   = c.has_value();
        if (c) {
          j["n"]        = c->n;
          j["terms"]    = J::array();
          for (auto const& t : c->terms) {
            j["terms"].push_back(to_prefix(t));
          }
          j["verified"] = v->valid();
        }
        out << j.dump(2) << "\n";
      } else if (c) {
        out << to_string(c->scheme) << " chain, n = " << c->n << " ("
            << c->terms.size() << " terms), "
            << (v->valid() ? "verified" : "NOT verified") << "\n";
        for (std::size_t i = 0; i < c->terms.size(); ++i) {
          out << "  " << i << ": " << to_prefix(c->terms[i]) << "\n";
        }
      } else {
        out << "no " << scheme << " chain with n <= " << max << "\n";
      }
      if (!c) {
        return Refuted;
      }
      return v->valid() ? Ok : Refuted;
    }

    int check_cmd(RunConfig const& cfg, std::string const& file,
                  std::string const& name, std::vector<std::size_t> const& args,
                  std::string const& idl, std::optional<std::size_t> k,
                  std::string const& mode, std::ostream& out) {
      FiniteAlgebra a = load_algebra(file);
      Identity      id;
      if (!name.empty() && !idl.empty()) {
        throw UsageError("give either --identity or --idl");
      }
      if (!name.empty()) {
        id = catalog_identity(name, args);
      } else if (!idl.empty()) {
        id      = parse_identity(read_file(idl));
        id.name = stem(idl);
      } else {
        throw UsageError("one of --identity, --idl is required");
      }
      Params params;
      if (k) {
        params["k"] = *k;
      }
      for (auto const& s : id.symbols()) {
        if (!params.count(s)) {
          throw UsageError("identity needs a value for " + s + " (--k)");
        }
      }
      Verdict v;
      if (mode == "pw") {
        std::string why;
        if (!pw_checkable(id, &why)) {
          throw UsageError("not decidable through the free algebra: " + why);
        }
        v = pw_check(a, id, params, cfg.engine());
      } else if (mode == "concrete") {
        v = check_concrete(a, id, CheckMode::EnumerateRelations, params,
                           cfg.engine());
      } else {
        throw UsageError("unknown mode " + mode);
      }
      if (cfg.json) {
        J j;
        j["algebra"]      = a.name();
        j["identity"]     = to_string(id);
        j["params"]       = J::object();
        for (auto const& [s, x] : params) {
          j["params"][s] = x;
        }
        j["mode"]         = mode;
        j["holds"]        = v.holds;
        j["varietyLevel"] = v.variety_level;
        j["tried"]        = v.tried;
        j["evidence"]     = v.evidence;
        if (v.pair) {
          j["pair"] = {v.pair->first, v.pair->second};
        }
        out << j.dump(2) << "\n";
      } else {
        out << (v.holds ? "holds" : "refuted")
            << (v.variety_level ? " in the variety" : " in the algebra") << "\n";
        if (!v.evidence.empty()) {
          out << v.evidence << "\n";
        }
      }
      return v.holds ? Ok : Refuted;
    }

    int spectrum_cmd(RunConfig const& cfg, std::string const& file,
                     std::string const& family, std::size_t from,
                     std::size_t to, std::vector<std::size_t> const& extra,
                     bool certify, std::ostream& out) {
      FiniteAlgebra       a = load_algebra(file);
      CatalogEntry const& e = catalog_entry(family);
      EngineOptions       o = cfg.engine();
      std::vector<std::vector<std::size_t>> runs;
      if (e.params.empty()) {
        runs.push_back({});
      } else {
        if (from > to) {
          throw UsageError("--m-from exceeds --m-to");
        }
        for (std::size_t m = from; m <= to; ++m) {
          std::vector<std::size_t> p{m};
          p.insert(p.end(), extra.begin(), extra.end());
          runs.push_back(std::move(p));
        }
      }
      std::optional<TermChain> day;
      if (certify && (family == "DAY" || family == "DAY_REV")) {
        try {
          day = search_day(a, o.spectrum_cap, o.free);
        } catch (CapExceeded const&) {
        }
      }
      FreeCache                  cache;
      std::vector<SpectrumEntry> got;
      for (auto const& p : runs) {
        got.push_back(measure_spectrum(a, family, p, cache, o,
                                       day ? &*day : nullptr, false));
      }
      bool all = true;
      J    arr = J::array();
      for (auto const& s : got) {
        all = all && s.value.is_known();
        if (cfg.json) {
          J j;
          j["family"]   = s.family;
          j["params"]   = s.result.params;
          j["m"]        = s.params.empty() ? J(nullptr) : J(s.params[0]);
          j["value"]    = measure_json(s.value);
          j["status"]   = s.value.is_known() ? "ok" : to_string(s.result.status);
          j["source"]   = s.source;
          j["evidence"] = s.result.evidence;
          arr.push_back(std::move(j));
        } else {
          std::string p;
          for (std::size_t i = 0; i < s.result.params.size(); ++i) {
            p += (i ? "," : "") + std::to_string(s.result.params[i]);
          }
          out << family << "(" << p << ") = " << measure_str(s.value);
          if (!s.value.is_known()) {
            out << "  [" << to_string(s.result.status) << "] "
                << s.result.evidence;
          }
          out << "\n";
        }
      }
      if (cfg.json) {
        out << arr.dump(2) << "\n";
      }
      return all ? Ok : Cap;
    }

    int bounds_cmd(RunConfig const& cfg, std::string const& name,
                   BoundParams const& params, bool list, std::ostream& out) {
      if (list) {
        J arr = J::array();
        for (auto const& f : bound_table()) {
          if (cfg.json) {
            arr.push_back({{"name", f.name},
                           {"params", f.params},
                           {"meaning", f.meaning},
                           {"constraints", f.constraints}});
          } else {
            out << f.name << " (";
            for (std::size_t i = 0; i < f.params.size(); ++i) {
              out << (i ? " " : "") << f.params[i];
            }
            out << ")  " << f.meaning;
            if (!f.constraints.empty()) {
              out << "  [" << f.constraints << "]";
            }
            out << "\n";
          }
        }
        if (cfg.json) {
          out << arr.dump(2) << "\n";
        }
        return Ok;
      }
      if (name.empty()) {
        throw UsageError("--name is required (or --list)");
      }
      BoundFormula const& f = bound_formula(name);
      BoundValue          v;
      try {
        v = bound(name, params);
      } catch (std::overflow_error const& e) {
        throw UsageError(e.what());
      }
      if (cfg.json) {
        J j;
        j["name"]   = f.name;
        j["params"] = J::object();
        for (auto const& [k, x] : params) {
          j["params"][k] = x;
        }
        j[f.lhs_name] = v.lhs;
        j[f.rhs_name] = v.rhs;
        out << j.dump(2) << "\n";
      } else {
        out << f.lhs_name << "=" << v.lhs << " " << f.rhs_name << "=" << v.rhs
            << "\n";
      }
      return Ok;
    }

    int verify_cmd(RunConfig const& cfg, std::vector<std::string> const& files,
                   std::ostream& out, std::ostream& err) {
      ReportOptions o;
      o.engine    = cfg.engine();
      bool failed = false;
      J    arr    = J::array();
      for (auto const& file : files) {
        FiniteAlgebra a = load_algebra(file);
        Report        r = consistency_report(a, stem(file), o);
        failed          = failed || !r.passed();
        if (cfg.json) {
          arr.push_back(J::parse(report_json(r)));
        } else {
          out << report_text(r);
        }
        if (std::size_t u = r.count(BoundStatus::Unchecked)) {
          err << stem(file) << ": " << u << " bounds unchecked within caps\n";
        }
      }
      if (cfg.json) {
        out << arr.dump(2) << "\n";
      }
      return failed ? Refuted : Ok;
    }
  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out,
          std::ostream& err) {
    CLI::App app{"Congruence modularity toolkit", "cmod"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_flag("--json", cfg.json, "JSON output");
    app.add_option("--threads", cfg.threads, "OpenMP threads (0 = default)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--cap-entries", cfg.cap_entries,
                   "free algebra cap, stored vector entries")
        ->check(CLI::PositiveNumber);
    app.add_option("--cap-work", cfg.cap_work, "free algebra work cap")
        ->check(CLI::PositiveNumber);
    app.add_option("--spectrum-cap", cfg.spectrum_cap, "largest k scanned")
        ->check(CLI::PositiveNumber);
    app.add_option("--enum-size", cfg.enum_size,
                   "largest algebra with full relation enumeration")
        ->check(CLI::PositiveNumber);

    std::string file, name, idl, scheme, mode = "pw", family;
    std::vector<std::string>   files;
    std::vector<std::size_t>   cat_args;
    std::size_t g = 3, max = 16, from = 3, to = 7;
    std::optional<std::size_t> k;
    bool dump = false, list = false, certify = false;

    auto* alg  = app.add_subcommand("alg", "algebra commands");
    alg->require_subcommand(1);
    auto* info = alg->add_subcommand("info", "size, operations, congruences");
    info->add_option("file", file, ".alg file")->required();

    auto* free = app.add_subcommand("free", "free algebra size");
    free->add_option("file", file, ".alg file")->required();
    free->add_option("-g,--generators", g, "generators")->required()
        ->check(CLI::Range(std::size_t(0), std::size_t(16)));
    free->add_flag("--dump", dump, "print a term for every element");

    auto* terms = app.add_subcommand("terms", "minimal term chain");
    terms->add_option("file", file, ".alg file")->required();
    terms->add_option("--scheme", scheme, "day, gumm, jonsson or alvin")
        ->required()
        ->check(CLI::IsMember({"day", "gumm", "jonsson", "alvin"}));
    terms->add_option("--max", max, "largest chain index searched");

    auto* check = app.add_subcommand("check", "decide one identity");
    check->add_option("file", file, ".alg file")->required();
    check->add_option("--identity", name, "catalog name");
    check->add_option("--args", cat_args, "catalog parameters");
    check->add_option("--idl", idl, "identity file");
    check->add_option("--k", k, "value of k");
    check->add_option("--mode", mode, "pw or concrete")
        ->check(CLI::IsMember({"pw", "concrete"}));

    auto* spec = app.add_subcommand("spectrum", "least k over a range of m");
    spec->add_option("file", file, ".alg file")->required();
    spec->add_option("--family", family, "catalog name")->required();
    spec->add_option("--m-from", from, "first m");
    spec->add_option("--m-to", to, "last m");
    spec->add_option("--cap", cfg.spectrum_cap, "largest k scanned")
        ->check(CLI::PositiveNumber);
    spec->add_option("--args", cat_args, "further catalog parameters");
    spec->add_flag("--certify", certify,
                   "certified paths for DAY and DAY_REV beyond the caps");

    auto* bounds = app.add_subcommand("bounds", "bound formula arithmetic");
    bounds->set_help_flag("--help", "Print this help message and exit");
    bounds->add_option("--name", name, "formula name");
    bounds->add_flag("--list", list, "list the formulas");
    std::map<std::string, std::uint64_t> bp;
    for (char const* p : {"r", "n", "p", "q", "h", "t", "s", "k", "m", "l", "i"}) {
      bounds->add_option_function<std::uint64_t>(
          std::string("--") + p,
          [&bp, p](std::uint64_t const& v) { bp[p] = v; }, "parameter");
    }

    auto* verify = app.add_subcommand("verify", "bound consistency report");
    verify->add_option("files", files, ".alg files")->required();

    std::vector<char const*> argv{"cmod"};
    for (auto const& a : args) {
      argv.push_back(a.c_str());
    }
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return Ok;
    } catch (CLI::CallForAllHelp const&) {
      out << app.help("", CLI::AppFormatMode::All);
      return Ok;
    } catch (CLI::ParseError const& e) {
      err << "cmod: " << e.what() << "\n";
      return Usage;
    }
    if (cfg.threads > 0) {
      omp_set_num_threads(cfg.threads);
    }

    try {
      if (*alg) {
        return alg_info(cfg, file, out);
      }
      if (*free) {
        return free_cmd(cfg, file, g, dump, out);
      }
      if (*terms) {
        return terms_cmd(cfg, file, scheme, max, out);
      }
      if (*check) {
        return check_cmd(cfg, file, name, cat_args, idl, k, mode, out);
      }
      if (*spec) {
        return spectrum_cmd(cfg, file, family, from, to, cat_args, certify,
                            out);
      }
      if (*bounds) {
        BoundParams p(bp.begin(), bp.end());
        return bounds_cmd(cfg, name, p, list, out);
      }
      if (*verify) {
        return verify_cmd(cfg, files, out, err);
      }
    } catch (CapExceeded const& e) {
      err << "cmod: cap exceeded: " << e.what() << "\n";
      return Cap;
    } catch (UsageError const& e) {
      err << "cmod: " << e.what() << "\n";
      return Usage;
    } catch (ParseError const& e) {
      err << "cmod: " << e.what() << "\n";
      return Usage;
    } catch (std::invalid_argument const& e) {
      err << "cmod: " << e.what() << "\n";
      return Usage;
    } catch (std::exception const& e) {
      err << "cmod: " << e.what() << "\n";
      return Usage;
    }
    return Usage;
  }

  int run(int argc, char const* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
  }

}  // namespace cmod::cli
