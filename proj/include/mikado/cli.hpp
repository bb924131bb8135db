#ifndef MIKADO_CLI_HPP
#define MIKADO_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mikado
{

// Exit status: 0 all enabled checks pass, 1 a check failed, 2 invalid configuration.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace mikado

#endif  // MIKADO_CLI_HPP
