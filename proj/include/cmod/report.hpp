#ifndef CMOD_REPORT_HPP_
#define CMOD_REPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmod/algebra.hpp"
#include "cmod/bounds.hpp"
#include "cmod/identity_engine.hpp"
#include "cmod/term_chain.hpp"

namespace cmod {

  struct ReportOptions {
    EngineOptions engine;
    std::size_t   m_from    = 3;
    std::size_t   m_to      = 7;
    std::size_t   day_max   = 16;
    std::size_t   gumm_max  = 8;
    std::size_t   jonsson_max = 8;
    // Fall back on certified_day when DAY or DAY_REV needs a free algebra
    // beyond the caps.
    bool certify = true;
  };

  // A measured least k.  Infinite only with a proof that no k works;
  // Above means larger than `value`.
  struct Measure {
    enum class Kind { Known, Above, Infinite, Unknown };
    Kind          kind  = Kind::Unknown;
    std::uint64_t value = 0;

    static Measure known(std::uint64_t v) {
      return {Kind::Known, v};
    }
    static Measure above(std::uint64_t v) {
      return {Kind::Above, v};
    }
    static Measure infinite() {
      return {Kind::Infinite, 0};
    }
    bool is_known() const noexcept {
      return kind == Kind::Known;
    }
    std::string str() const;
  };

  struct SpectrumEntry {
    std::string              family;
    std::vector<std::size_t> params;
    Measure                  value;
    SpectrumResult           result;
    // "pw", "path", "nonmodular" or "enumeration".
    std::string source;
  };

  enum class BoundStatus { Pass, Fail, Unchecked, NotApplicable };
  char const* to_string(BoundStatus s) noexcept;

  struct BoundCheck {
    std::string name;
    BoundParams params;
    // What was measured, e.g. "DAY(7)".
    std::string target;
    // "<=" or "==".
    std::string relation = "<=";
    Measure     claimed;
    Measure     measured;
    BoundStatus status = BoundStatus::Unchecked;
    std::string note;
  };

  struct Report {
    std::string                algebra;
    std::optional<std::size_t> day_k;
    std::optional<std::size_t> gumm_n;
    std::optional<std::size_t> jonsson_n;
    // Set when some algebra in the variety has a nonmodular congruence
    // lattice.
    std::string                nonmodular;
    std::vector<SpectrumEntry> spectra;
    std::vector<BoundCheck>    bounds;

    bool passed() const noexcept;
    std::size_t count(BoundStatus s) const noexcept;
  };

  // Congruences a, b, c of some F(g), g <= 3, with c <= a and
  // a & (b + c) != (a & b) + c; empty if none was found.
  std::string nonmodular_witness(FiniteAlgebra const& a,
                                 FreeCache&           cache,
                                 EngineOptions const& opts = {});

  // spectrum() with two fallbacks for DAY and DAY_REV: certified_day from
  // `day` when the free algebra exceeds the caps, and infinity when the
  // variety is known to be nonmodular (DSTAR too).
  SpectrumEntry measure_spectrum(FiniteAlgebra const&            a,
                                 std::string const&              family,
                                 std::vector<std::size_t> const& params,
                                 FreeCache&                      cache,
                                 EngineOptions const&            opts,
                                 TermChain const*                day,
                                 bool                            nonmodular);

  // Measures the term counts and spectra, then instantiates every bound
  // formula with them.  Rows are sorted by name, then parameters.
  Report consistency_report(FiniteAlgebra const& a,
                            std::string          name,
                            ReportOptions const& opts = {});
  Report consistency_report(FiniteAlgebra const& a,
                            std::string          name,
                            FreeCache&           cache,
                            ReportOptions const& opts = {});

  // {algebra, dayK, gummN, jonssonN, nonmodular, spectra, bounds, passed}.
  std::string report_json(Report const& r, int indent = 2);
  std::string report_text(Report const& r);

}  // namespace cmod

#endif  // CMOD_REPORT_HPP_
