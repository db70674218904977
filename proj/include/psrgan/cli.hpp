#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace psrgan {

// exit codes: 0 ok, 2 config error, 3 data error, 4 divergence
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace psrgan
