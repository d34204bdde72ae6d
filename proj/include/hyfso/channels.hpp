#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hyfso/rng.hpp"

namespace hyfso {

// Hop index convention everywhere: 0 = source->relay, 1 = relay->destination.

struct FsoLinkParams {
  double responsivity = 0.5;        // detector scale R
  double aperture_radius = 0.1;     // r [m]
  double divergence = 2e-3;         // full beam divergence [rad]
  double distance = 800.0;          // d [m]
  double attenuation = 0.032;       // k [dB/m]
  double turb_shape_a = 2.23;       // Gamma-Gamma large-scale shape
  double turb_shape_b = 1.54;       // Gamma-Gamma small-scale shape
  double noise_variance = 1e-14;    // receiver noise [A^2]
  double tx_intensity = 0.02;       // on-level optical power [W]
  double bandwidth = 1e9;           // [Hz]
};

struct RfLinkParams {
  double wavelength = 0.0857;       // [m]
  double tx_gain = 10.0;            // linear
  double rx_gain = 10.0;            // linear
  double ref_distance = 80.0;       // far-field reference [m]
  double distance = 800.0;          // d [m]
  double path_loss_exp = 3.5;       // nu
  double rician_k = 4.0;            // direct/scattered power ratio
  double fading_power = 1.0;        // E[|g~|^2]
  double noise_psd_dbm_mhz = -114.0;
  double noise_figure_db = 5.0;
  double tx_power = 0.2;            // [W]
  double bandwidth = 2e7;           // [Hz]
};

struct NetworkConfig {
  int relay_count = 1;
  // [hop][relay]
  std::array<std::vector<FsoLinkParams>, 2> fso;
  std::array<std::vector<RfLinkParams>, 2> rf;
  long slots = 1;
  uint64_t seed = 1;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Uniform-distance helper: every hop-l link uses the given distances, all
// other parameters at the reference defaults above.
NetworkConfig make_network(int relay_count, double d_hop1, double d_hop2,
                           long slots = 1, uint64_t seed = 1);

struct FadingRealization {
  // h[hop][relay]: total FSO gain (average gain times unit-mean turbulence).
  std::array<std::vector<double>, 2> h;
  // g_mag[hop][relay]: |g| = sqrt(avg gain) * Rician magnitude.
  std::array<std::vector<double>, 2> g_mag;
};

struct CapacityMatrix {
  int relay_count = 0;
  std::array<std::vector<double>, 2> fso;  // [hop][relay], bit/s
  std::array<std::vector<double>, 2> rf;   // [hop][relay], bit/s
};

// h_bar = R * erf(sqrt(pi)*r / (sqrt(2)*phi*d))^2 * 10^(-k*d/10).
// d -> 0 is legal: erf argument diverges, both factors saturate at 1.
double fso_avg_gain(const FsoLinkParams& p);

// g_bar = [lambda*sqrt(Gt*Gr) / (4*pi*d_ref)]^2 * (d_ref/d)^nu.
double rf_avg_gain(const RfLinkParams& p);

// Noise power in W from dBm arithmetic:
// dBm = N0[dBm/MHz] + 10*log10(W/1e6) + NF[dB].
double rf_noise_power_w(const RfLinkParams& p);

// Gauss-Hermite rule for weight exp(-t^2) on (-inf, inf).
// Nodes ascending, sum of weights = sqrt(pi).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermite& gauss_hermite(int order);

inline constexpr int kDefaultGhOrder = 128;

// Mutual information (bit/symbol) of equiprobable binary {0, p} input over
// an AWGN channel, as a function of ratio = p/sigma. Gauss-Hermite evaluation
// of the closed-form single integral; exact limits 0 at ratio 0, 1 at inf.
double ook_mutual_information(double ratio, int order = kDefaultGhOrder);

// W * MI(p_signal/sigma), clamped to [0, W].
double fso_capacity(double p_signal, double sigma, double bandwidth,
                    int order = kDefaultGhOrder);

// W * log2(1 + q^2/delta2).
double rf_capacity(double q_amplitude, double delta2, double bandwidth);

// Draw order is fixed and documented: FSO hop 1 relays 1..M, FSO hop 2,
// then RF hop 1, RF hop 2. Changing it breaks seed reproducibility.
FadingRealization sample_fading(const NetworkConfig& cfg, Rng& rng);

CapacityMatrix capacities(const NetworkConfig& cfg,
                          const FadingRealization& fading,
                          int order = kDefaultGhOrder);

// Draws `slots` consecutive capacity matrices from the given generator.
// Materializing the stream lets several policies see identical channels.
std::vector<CapacityMatrix> capacity_stream(const NetworkConfig& cfg,
                                            long slots, Rng& rng,
                                            int order = kDefaultGhOrder);

}  // namespace hyfso
