#include "sinrcast/netio.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("network file line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  }
}

std::uint64_t parse_uint(const std::string& tok, std::size_t lineno) {
  try {
    std::size_t used = 0;
    if (!tok.empty() && tok[0] == '-') throw std::invalid_argument(tok);
    const auto v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("network file line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
  }
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

void write_network(std::ostream& out, const Network& net) {
  const auto& p = net.params();
  out << net.size() << ' ' << net.id_domain() << ' ' << fmt17(p.eps) << ' ' << fmt17(p.alpha) << ' '
      << fmt17(p.beta) << ' ' << fmt17(p.noise) << '\n';
  for (const auto& s : net.stations()) out << s.id << ' ' << fmt17(s.pos.x) << ' ' << fmt17(s.pos.y) << '\n';
}

std::string network_text(const Network& net) {
  std::ostringstream os;
  write_network(os, net);
  return os.str();
}

Network read_network(std::istream& in, double eta, double zeta) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++lineno;
    header = tokens(line);
  }
  if (header.size() != 6) throw ParseError("network file: header must be 'n I eps alpha beta noise'");
  const auto n = parse_uint(header[0], lineno);
  const auto I = parse_uint(header[1], lineno);
  SinrParams params = SinrParams::make(parse_double(header[3], lineno), parse_double(header[4], lineno),
                                       parse_double(header[5], lineno), parse_double(header[2], lineno), eta, zeta);
  std::vector<Station> stations;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = tokens(line);
    if (t.empty()) continue;
    if (t.size() != 3) throw ParseError("network file line " + std::to_string(lineno) + ": expected 'id x y'");
    stations.push_back({parse_uint(t[0], lineno), {parse_double(t[1], lineno), parse_double(t[2], lineno)}});
  }
  if (stations.size() != n) {
    std::ostringstream os;
    os << "network file: header announces " << n << " stations, found " << stations.size();
    throw ParseError(os.str());
  }
  return Network(std::move(stations), I, params);
}

Network load_network(const std::string& path, double eta, double zeta) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  return read_network(in, eta, zeta);
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  write_network(out, net);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sinrcast
