#include "hyfso/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hyfso {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_fso(const FsoLinkParams& p, const std::string& where) {
  require(p.responsivity > 0, where + ": responsivity must be > 0");
  require(p.aperture_radius > 0, where + ": aperture_radius must be > 0");
  require(p.divergence > 0, where + ": divergence must be > 0");
  require(p.distance > 0, where + ": distance must be > 0");
  require(p.attenuation >= 0, where + ": attenuation must be >= 0");
  require(p.turb_shape_a > 0 && p.turb_shape_b > 0,
          where + ": turbulence shapes must be > 0");
  require(p.noise_variance > 0, where + ": noise_variance must be > 0");
  require(p.tx_intensity > 0, where + ": tx_intensity must be > 0");
  require(p.bandwidth > 0, where + ": bandwidth must be > 0");
}

void validate_rf(const RfLinkParams& p, const std::string& where) {
  require(p.wavelength > 0, where + ": wavelength must be > 0");
  require(p.tx_gain > 0 && p.rx_gain > 0, where + ": gains must be > 0");
  require(p.ref_distance > 0, where + ": ref_distance must be > 0");
  require(p.distance > 0, where + ": distance must be > 0");
  require(p.path_loss_exp >= 2.0, where + ": path_loss_exp must be >= 2");
  require(p.rician_k >= 0, where + ": rician_k must be >= 0");
  require(p.fading_power > 0, where + ": fading_power must be > 0");
  require(p.tx_power > 0, where + ": tx_power must be > 0");
  require(p.bandwidth > 0, where + ": bandwidth must be > 0");
}

}  // namespace

void NetworkConfig::validate() const {
  require(relay_count >= 1, "relay_count must be >= 1");
  require(slots >= 1, "slots must be >= 1");
  for (int l = 0; l < 2; ++l) {
    require(static_cast<int>(fso[l].size()) == relay_count,
            "fso[" + std::to_string(l) + "] size must equal relay_count");
    require(static_cast<int>(rf[l].size()) == relay_count,
            "rf[" + std::to_string(l) + "] size must equal relay_count");
    for (int m = 0; m < relay_count; ++m) {
      std::string at = "hop " + std::to_string(l + 1) + " relay " +
                       std::to_string(m + 1);
      validate_fso(fso[l][m], "fso " + at);
      validate_rf(rf[l][m], "rf " + at);
    }
  }
}

NetworkConfig make_network(int relay_count, double d_hop1, double d_hop2,
                           long slots, uint64_t seed) {
  NetworkConfig cfg;
  cfg.relay_count = relay_count;
  cfg.slots = slots;
  cfg.seed = seed;
  const double d[2] = {d_hop1, d_hop2};
  for (int l = 0; l < 2; ++l) {
    cfg.fso[l].assign(relay_count, FsoLinkParams{});
    cfg.rf[l].assign(relay_count, RfLinkParams{});
    for (int m = 0; m < relay_count; ++m) {
      cfg.fso[l][m].distance = d[l];
      cfg.rf[l][m].distance = d[l];
    }
  }
  return cfg;
}

double fso_avg_gain(const FsoLinkParams& p) {
  double geo = 1.0;
  if (p.distance > 0) {
    double arg = std::sqrt(M_PI) * p.aperture_radius /
                 (std::sqrt(2.0) * p.divergence * p.distance);
    double e = std::erf(arg);
    geo = e * e;
  }
  double atten = std::pow(10.0, -p.attenuation * p.distance / 10.0);
  return p.responsivity * geo * atten;
}

double rf_avg_gain(const RfLinkParams& p) {
  if (p.distance <= 0) throw std::invalid_argument("rf_avg_gain: distance must be > 0");
  double a = p.wavelength * std::sqrt(p.tx_gain * p.rx_gain) /
             (4.0 * M_PI * p.ref_distance);
  return a * a * std::pow(p.ref_distance / p.distance, p.path_loss_exp);
}

double rf_noise_power_w(const RfLinkParams& p) {
  double dbm = p.noise_psd_dbm_mhz + 10.0 * std::log10(p.bandwidth / 1e6) +
               p.noise_figure_db;
  return 1e-3 * std::pow(10.0, dbm / 10.0);
}

namespace {

// Nodes/weights for exp(-t^2) weight via Newton on the orthonormal Hermite
// recurrence; values stay O(1) so there is no overflow at high order.
GaussHermite compute_gauss_hermite(int n) {
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double pim4 = std::pow(M_PI, -0.25);
  int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    // Stroud-Secrest style initial guesses, refined by Newton.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * gh.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * gh.nodes[n - 2];
    } else {
      z = 2.0 * z - gh.nodes[n - i + 1];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    gh.nodes[n - 1 - i] = z;
    gh.nodes[i] = -z;
    gh.weights[n - 1 - i] = 2.0 / (pp * pp);
    gh.weights[i] = gh.weights[n - 1 - i];
  }
  if (n % 2 == 1) gh.nodes[n / 2] = 0.0;
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static std::map<int, GaussHermite> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_hermite(order)).first;
  return it->second;
}

double ook_mutual_information(double ratio, int order) {
  if (ratio <= 0.0) return 0.0;
  const GaussHermite& gh = gauss_hermite(order);
  const double u = ratio / std::sqrt(2.0);
  const double u2 = u * u;
  const double inv_ln2 = 1.0 / std::log(2.0);
  double acc = 0.0;
  for (size_t i = 0; i < gh.nodes.size(); ++i) {
    double t = gh.nodes[i];
    // log2(1 + e^{2ut-u^2} + e^{-2ut-u^2} + e^{-2u^2}) via logsumexp.
    double a1 = 2.0 * u * t - u2;
    double a2 = -2.0 * u * t - u2;
    double a3 = -2.0 * u2;
    double mx = std::max({0.0, a1, a2, a3});
    double s = std::exp(0.0 - mx) + std::exp(a1 - mx) + std::exp(a2 - mx) +
               std::exp(a3 - mx);
    acc += gh.weights[i] * (mx + std::log(s)) * inv_ln2;
  }
  double mi = 1.0 - acc / (2.0 * std::sqrt(M_PI));
  return std::clamp(mi, 0.0, 1.0);
}

double fso_capacity(double p_signal, double sigma, double bandwidth, int order) {
  if (p_signal < 0 || sigma <= 0 || bandwidth <= 0)
    throw std::invalid_argument("fso_capacity: need p >= 0, sigma > 0, W > 0");
  if (p_signal == 0.0) return 0.0;
  return bandwidth * ook_mutual_information(p_signal / sigma, order);
}

double rf_capacity(double q_amplitude, double delta2, double bandwidth) {
  if (q_amplitude < 0 || delta2 <= 0 || bandwidth <= 0)
    throw std::invalid_argument("rf_capacity: need q >= 0, delta2 > 0, W > 0");
  return bandwidth * std::log2(1.0 + q_amplitude * q_amplitude / delta2);
}

FadingRealization sample_fading(const NetworkConfig& cfg, Rng& rng) {
  FadingRealization f;
  for (int l = 0; l < 2; ++l) {
    f.h[l].resize(cfg.relay_count);
    for (int m = 0; m < cfg.relay_count; ++m) {
      const FsoLinkParams& p = cfg.fso[l][m];
      f.h[l][m] = fso_avg_gain(p) * rng.gamma_gamma(p.turb_shape_a, p.turb_shape_b);
    }
  }
  for (int l = 0; l < 2; ++l) {
    f.g_mag[l].resize(cfg.relay_count);
    for (int m = 0; m < cfg.relay_count; ++m) {
      const RfLinkParams& p = cfg.rf[l][m];
      f.g_mag[l][m] = std::sqrt(rf_avg_gain(p)) *
                      rng.rician_mag(p.rician_k, p.fading_power);
    }
  }
  return f;
}

CapacityMatrix capacities(const NetworkConfig& cfg,
                          const FadingRealization& fading, int order) {
  CapacityMatrix c;
  c.relay_count = cfg.relay_count;
  for (int l = 0; l < 2; ++l) {
    c.fso[l].resize(cfg.relay_count);
    c.rf[l].resize(cfg.relay_count);
    for (int m = 0; m < cfg.relay_count; ++m) {
      const FsoLinkParams& fp = cfg.fso[l][m];
      c.fso[l][m] = fso_capacity(fp.tx_intensity * fading.h[l][m],
                                 std::sqrt(fp.noise_variance), fp.bandwidth,
                                 order);
      const RfLinkParams& rp = cfg.rf[l][m];
      double q = std::sqrt(rp.tx_power) * fading.g_mag[l][m];
      c.rf[l][m] = rf_capacity(q, rf_noise_power_w(rp), rp.bandwidth);
    }
  }
  return c;
}

std::vector<CapacityMatrix> capacity_stream(const NetworkConfig& cfg,
                                            long slots, Rng& rng, int order) {
  std::vector<CapacityMatrix> stream;
  stream.reserve(static_cast<std::size_t>(slots));
  for (long b = 0; b < slots; ++b)
    stream.push_back(capacities(cfg, sample_fading(cfg, rng), order));
  return stream;
}

}  // namespace hyfso
