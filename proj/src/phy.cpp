#include "uwbcap/phy.hpp"

#include <cmath>
#include <cstdio>

#include "uwbcap/errors.hpp"

namespace uwbcap {

Bandwidth Bandwidth::hz(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("bandwidth must be positive and finite");
  return Bandwidth(w);
}

double Bandwidth::hz() const {
  if (is_infinite()) throw ContractError("bandwidth is infinite");
  return hz_;
}

std::string Bandwidth::to_string() const {
  if (is_infinite()) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", hz_);
  return buf;
}

Bandwidth Bandwidth::parse(const std::string& text) {
  if (text == "inf" || text == "infinite") return infinite();
  std::size_t used = 0;
  double w = 0.0;
  try {
    w = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("bandwidth must be 'inf' or a positive number, got '" + text + "'");
  }
  if (used != text.size()) throw DomainError("bandwidth: trailing characters in '" + text + "'");
  return hz(w);
}

void PhyParams::validate() const {
  if (!(p0 > 0.0)) throw DomainError("P0 must be positive");
  if (!(n0 > 0.0)) throw DomainError("N0 must be positive");
  if (!(alpha >= 1.0)) throw DomainError("alpha must be >= 1");
}

double gain(double d, double alpha) {
  if (!(d > 0.0)) throw SingularityError("gain: zero distance");
  if (alpha == 2.0) return 1.0 / (d * d);
  return std::pow(d, -alpha);
}

double rate_infinite_bw(double power, double g, double n0) {
  if (power < 0.0) throw DomainError("rate: negative power");
  return power * g / n0;
}

double rate_finite_bw(double power, double g, double n0, double w, double interference) {
  if (power < 0.0) throw DomainError("rate: negative power");
  if (!(w > 0.0)) throw DomainError("rate: bandwidth must be positive");
  if (interference < 0.0) throw DomainError("rate: negative interference");
  return w * std::log1p(power * g / (n0 * w + interference));
}

double power_for_rate(double rate, double d, double alpha, double n0) {
  if (rate < 0.0) throw DomainError("power_for_rate: negative rate");
  if (!(d > 0.0)) throw SingularityError("power_for_rate: zero distance");
  return rate * n0 * std::pow(d, alpha);
}

BandPlan BandPlan::single(std::size_t n, double w) {
  return BandPlan{std::vector<std::size_t>(n, 0), {w}};
}

double sinr(const Network& net, std::span<const LinkAllocation> allocations, std::size_t rx,
            const BandPlan& bands, const PhyParams& phy) {
  const LinkAllocation* own = nullptr;
  for (const auto& a : allocations) {
    if (a.rx != rx) continue;
    if (own != nullptr) throw DomainError("sinr: node receives more than one allocation");
    own = &a;
  }
  if (own == nullptr) throw DomainError("sinr: node " + std::to_string(rx) + " is not a receiver");
  const std::size_t band = bands.band_of_node.at(own->tx);
  const double w = bands.band_width.at(band);
  const double signal = own->power * gain(net.distance(own->tx, rx), phy.alpha);
  double interference = 0.0;
  for (const auto& a : allocations) {
    if (&a == own || a.tx == own->tx || a.tx == rx) continue;
    if (bands.band_of_node.at(a.tx) != band) continue;
    interference += a.power * gain(net.distance(a.tx, rx), phy.alpha);
  }
  return signal / (w * phy.n0 + interference);
}

std::vector<double> total_interference(const Network& net, const PhyParams& phy) {
  const std::size_t n = net.size();
  const Sphere sphere = net.sphere();
  std::vector<double> acc(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double g = gain(sphere.distance(net.nodes[j], net.nodes[k]), phy.alpha);
      acc[j] += g;
      acc[k] += g;
    }
  }
  for (auto& v : acc) v *= phy.p0;
  return acc;
}

double interference_envelope(std::size_t n, const PhyParams& phy, const Sphere& sphere) {
  return phy.p0 * static_cast<double>(n) * std::pow(close_pair_threshold(n, sphere), -phy.alpha);
}

}  // namespace uwbcap
