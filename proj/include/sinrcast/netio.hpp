#pragma once

// Network text files: "n I eps alpha beta noise" then "id x y" per station,
// 17 significant digits so doubles round-trip exactly.

#include <iosfwd>
#include <string>

#include "sinrcast/sinr.hpp"

namespace sinrcast {

void write_network(std::ostream& out, const Network& net);
std::string network_text(const Network& net);

// eta and zeta are not stored; they come from the caller. Throws ParseError.
Network read_network(std::istream& in, double eta = 0.2, double zeta = 0.1);

Network load_network(const std::string& path, double eta = 0.2, double zeta = 0.1);
void save_network(const std::string& path, const Network& net);

}  // namespace sinrcast
