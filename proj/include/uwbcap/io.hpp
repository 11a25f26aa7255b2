#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uwbcap/capacity.hpp"
#include "uwbcap/mac.hpp"
#include "uwbcap/netgen.hpp"
#include "uwbcap/routing.hpp"
#include "uwbcap/tessellate.hpp"

namespace uwbcap {

/// %.17g: enough digits to round-trip any double.
std::string format_double(double v);

/// Network text format:
///   # uwbcap-network v1
///   # n=<n> seed=<seed> area_mode=<unit|scaled> a0=<a0>
///   index,x,y,z,dest
///   0,<x>,<y>,<z>,<dest or ->
void write_network(std::ostream& out, const Network& net);

/// Inverse of write_network; coordinates within 1e-12 of unit length are
/// taken verbatim, others are normalized. Throws DomainError on malformed input.
Network read_network(std::istream& in);
Network read_network_file(const std::string& path);

/// Tessellation text format: header with n, c_area, rho and cell count, then
/// index,x,y,z per generator.
void write_tessellation(std::ostream& out, const Tessellation& tess);

/// source,destination,hops,nodes,L,D,cost with nodes joined by ';'.
void write_routes(std::ostream& out, std::span<const Route> routes);

/// node,band,interference,sinr_degradation
void write_audit_records(std::ostream& out, std::span<const AuditRecord> records);

/// Minimal CSV row builder.
class CsvRow {
 public:
  CsvRow& operator<<(const std::string& s);
  CsvRow& operator<<(const char* s) { return *this << std::string(s); }
  CsvRow& operator<<(double v) { return *this << format_double(v); }
  CsvRow& operator<<(std::size_t v) { return *this << std::to_string(v); }
  CsvRow& operator<<(unsigned long long v) { return *this << std::to_string(v); }
  CsvRow& operator<<(bool v) { return *this << std::string(v ? "1" : "0"); }
  const std::string& str() const { return line_; }

 private:
  std::string line_;
  bool first_ = true;
};

std::vector<std::string> split(const std::string& s, char sep);

}  // namespace uwbcap
