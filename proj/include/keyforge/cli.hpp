#ifndef KEYFORGE_CLI_HPP
#define KEYFORGE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace keyforge {

// Command-line driver. Exit codes: 0 success, 1 verdict failure
// (iskey -> No, chain check -> failed identity), 2 usage or parse errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Built-in property suites (valuation axioms, epsilon laws, classification
// table, residual anchors, parser round-trips). Returns the number of
// failing suites.
int selftest(unsigned long seed, std::ostream& out);

} // namespace keyforge

#endif
