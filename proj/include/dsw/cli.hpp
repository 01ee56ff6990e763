#ifndef DSW_CLI_HPP
#define DSW_CLI_HPP

#include <string>
#include <vector>

namespace dsw::cli {

// Exit codes: 0 ok, 2 invalid input, 3 solver failure, 4 instability.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace dsw::cli

#endif
