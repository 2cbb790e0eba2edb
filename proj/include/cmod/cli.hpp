#ifndef CMOD_CLI_HPP_
#define CMOD_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace cmod::cli {

  enum Exit : int { Ok = 0, Refuted = 1, Usage = 2, Cap = 3 };

  // args excludes the program name.  Results go to `out`, diagnostics to
  // `err`.
  int run(std::vector<std::string> const& args,
          std::ostream&                   out,
          std::ostream&                   err);
  int run(int argc, char const* const* argv);

}  // namespace cmod::cli

#endif  // CMOD_CLI_HPP_
