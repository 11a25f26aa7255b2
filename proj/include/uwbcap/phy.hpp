#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "uwbcap/netgen.hpp"

namespace uwbcap {

/// System bandwidth in Hz, or the distinguished infinite value that selects
/// the power-limited rate P g / N0 exactly.
class Bandwidth {
 public:
  static Bandwidth infinite() { return Bandwidth(-1.0); }
  static Bandwidth hz(double w);

  bool is_infinite() const { return hz_ < 0.0; }
  /// Throws ContractError when infinite.
  double hz() const;

  std::string to_string() const;
  /// "inf" or a positive number.
  static Bandwidth parse(const std::string& text);

  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;

 private:
  explicit Bandwidth(double w) : hz_(w) {}
  double hz_;
};

struct PhyParams {
  double p0 = 1.0;     ///< max transmit power per node (W)
  double n0 = 1.0;     ///< noise spectral density (W/Hz)
  Bandwidth bandwidth = Bandwidth::infinite();
  double alpha = 2.0;  ///< distance-loss exponent

  /// Throws DomainError unless p0 > 0, n0 > 0, alpha >= 1.
  void validate() const;
};

/// Channel gain d^-alpha. Throws SingularityError for d <= 0.
double gain(double d, double alpha);

/// Rates are in nats/s throughout.
double rate_infinite_bw(double power, double gain, double n0);
double rate_finite_bw(double power, double gain, double n0, double w, double interference = 0.0);

/// Transmit power that carries `rate` over distance d at infinite bandwidth:
/// rate * N0 * d^alpha. Throws SingularityError for d <= 0.
double power_for_rate(double rate, double d, double alpha, double n0);

struct LinkAllocation {
  std::size_t tx = 0;
  std::size_t rx = 0;
  double power = 0.0;  ///< W
  double rate = 0.0;   ///< nats/s
};

/// Frequency band of each transmitting node and the width of each band.
struct BandPlan {
  std::vector<std::size_t> band_of_node;
  std::vector<double> band_width;

  /// Every node in one band of width w.
  static BandPlan single(std::size_t n, double w);
};

/// P_tx g / (W_band N0 + sum of co-band interferers' received power) at `rx`.
/// Interferers are the other allocations whose transmitter shares rx's band;
/// a transmitter located at rx itself is ignored. Throws DomainError unless rx
/// receives exactly one allocation.
double sinr(const Network& net, std::span<const LinkAllocation> allocations, std::size_t rx,
            const BandPlan& bands, const PhyParams& phy);

/// Received power at every node when all other nodes transmit at P0 over the
/// full band: I_j = sum_{k != j} P0 g_kj.
std::vector<double> total_interference(const Network& net, const PhyParams& phy);

/// P0 n d^-alpha with d the close-pair distance threshold; equals
/// P0 n (n^2 log n)^{alpha/2} on the unit-area sphere.
double interference_envelope(std::size_t n, const PhyParams& phy, const Sphere& sphere);

}  // namespace uwbcap
