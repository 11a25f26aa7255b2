#include "uwbcap/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "uwbcap/errors.hpp"

namespace uwbcap {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse " + what + " '" + s + "'");
  }
  if (used != s.size()) throw DomainError("cannot parse " + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw DomainError("cannot parse " + what + " '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

CsvRow& CsvRow::operator<<(const std::string& s) {
  if (!first_) line_.push_back(',');
  first_ = false;
  line_ += s;
  return *this;
}

void write_network(std::ostream& out, const Network& net) {
  out << "# uwbcap-network v1\n";
  out << "# n=" << net.size() << " seed=" << net.seed << " area_mode=" << to_string(net.area.kind)
      << " a0=" << format_double(net.area.a0) << "\n";
  out << "index,x,y,z,dest\n";
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& p = net.nodes[i];
    CsvRow row;
    row << i << p.x() << p.y() << p.z();
    row << (net.has_destinations() ? std::to_string(net.dest[i]) : std::string("-"));
    out << row.str() << "\n";
  }
}

Network read_network(std::istream& in) {
  Network net;
  std::string line;
  std::size_t declared = 0;
  bool have_dest = true;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string kv;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "n") declared = parse_u64(value, "n");
        else if (key == "seed") net.seed = parse_u64(value, "seed");
        else if (key == "area_mode") net.area.kind = parse_area_kind(value);
        else if (key == "a0") net.area.a0 = parse_double(value, "a0");
      }
      continue;
    }
    if (!header_seen) {
      if (line != "index,x,y,z,dest") throw DomainError("network: expected header 'index,x,y,z,dest'");
      header_seen = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 5) throw DomainError("network: expected 5 columns in '" + line + "'");
    if (parse_u64(cols[0], "index") != net.nodes.size()) throw DomainError("network: indices must be 0..n-1 in order");
    const Vec3 v{parse_double(cols[1], "x"), parse_double(cols[2], "y"), parse_double(cols[3], "z")};
    net.nodes.push_back(std::abs(norm(v) - 1.0) <= 1e-12 ? SpherePoint::from_unit(v) : SpherePoint::from_vector(v));
    if (cols[4] == "-") {
      have_dest = false;
    } else {
      net.dest.push_back(parse_u64(cols[4], "dest"));
    }
  }
  if (declared != 0 && declared != net.size()) throw DomainError("network: row count differs from header n");
  if (net.size() < 2) throw DomainError("network: need at least 2 nodes");
  if (!have_dest) {
    net.dest.clear();
  } else {
    for (std::size_t i = 0; i < net.size(); ++i) {
      if (net.dest[i] >= net.size() || net.dest[i] == i) throw DomainError("network: invalid destination of node " + std::to_string(i));
    }
  }
  if (net.area.kind == AreaMode::Kind::scaled && !(net.area.a0 > 0.0)) throw DomainError("network: a0 must be positive");
  return net;
}

Network read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open network file '" + path + "'");
  return read_network(in);
}

void write_tessellation(std::ostream& out, const Tessellation& tess) {
  out << "# uwbcap-tessellation v1\n";
  out << "# n=" << tess.n() << " c_area=" << format_double(tess.c_area()) << " rho=" << format_double(tess.rho())
      << " cells=" << tess.cell_count() << " radius=" << format_double(tess.sphere().radius()) << "\n";
  out << "index,x,y,z\n";
  for (std::size_t k = 0; k < tess.cell_count(); ++k) {
    const auto& g = tess.generator(k);
    CsvRow row;
    row << k << g.x() << g.y() << g.z();
    out << row.str() << "\n";
  }
}

void write_routes(std::ostream& out, std::span<const Route> routes) {
  out << "source,destination,hops,nodes,L,D,cost\n";
  for (const auto& r : routes) {
    std::string nodes;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      if (k) nodes.push_back(';');
      nodes += std::to_string(r.nodes[k]);
    }
    CsvRow row;
    row << r.source() << r.destination() << r.hop_count() << nodes << r.length << r.direct << r.cost;
    out << row.str() << "\n";
  }
}

void write_audit_records(std::ostream& out, std::span<const AuditRecord> records) {
  out << "node,band,interference,sinr_degradation\n";
  for (const auto& r : records) {
    CsvRow row;
    row << r.node << r.band << r.interference << r.sinr_degradation;
    out << row.str() << "\n";
  }
}

}  // namespace uwbcap
