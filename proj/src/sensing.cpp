// SPDX-License-Identifier: Apache-2.0
//
// beampomdp: adaptive pilot-beam design for sparse mmWave channels
// Copyright (C) 2026 The beampomdp authors
// ------------------------------------------------------------------------

#include "beampomdp/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

#include "beampomdp/errors.hpp"

namespace beampomdp {

ActionVector ActionVector::make(std::vector<int> cols, int n_tx) {
  for (std::size_t m = 0; m < cols.size(); ++m) {
    if (cols[m] < 0 || cols[m] >= n_tx) throw std::invalid_argument("action column out of range");
    if (m > 0 && cols[m] <= cols[m - 1]) {
      throw std::invalid_argument("action columns must be strictly ascending");
    }
  }
  return ActionVector{std::move(cols)};
}

bool ActionVector::contains(int col) const { return std::binary_search(cols.begin(), cols.end(), col); }

ActionSpace::ActionSpace(int n_tx, int n_pilots) : n_tx_(n_tx), n_pilots_(n_pilots) {
  if (n_pilots < 1 || n_pilots > n_tx) throw std::invalid_argument("need 1 <= n_pilots <= n_tx");
  std::vector<int> comb(n_pilots);
  for (int m = 0; m < n_pilots; ++m) comb[m] = m;
  while (true) {
    actions_.push_back(ActionVector{comb});
    int m = n_pilots - 1;
    while (m >= 0 && comb[m] == n_tx - n_pilots + m) --m;
    if (m < 0) break;
    ++comb[m];
    for (int r = m + 1; r < n_pilots; ++r) comb[r] = comb[r - 1] + 1;
  }
}

std::size_t ActionSpace::index_of(const ActionVector& action) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), action);
  if (it == actions_.end() || *it != action) throw std::out_of_range("action not in action space");
  return static_cast<std::size_t>(it - actions_.begin());
}

double DetectorModel::bin_false_alarm() const { return std::exp(-tau); }

DetectorModel DetectorModel::from_table(std::vector<double> d) {
  if (d.empty()) throw std::invalid_argument("detector table is empty");
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!(d[k] >= 0.0 && d[k] <= 1.0)) throw std::invalid_argument("detector probability out of [0, 1]");
    if (k > 0 && d[k] < d[k - 1]) throw std::invalid_argument("detector table must be nondecreasing");
  }
  DetectorModel det;
  det.d = std::move(d);
  return det;
}

double effective_snr(const ChannelConfig& cfg) {
  const double rho = std::pow(10.0, cfg.tx_power_db / 10.0);
  return rho * cfg.n_tx * cfg.gain_var / cfg.noise_var;
}

double threshold_for_false_alarm(int n_rx, double column_pfa) {
  if (n_rx < 1) throw std::invalid_argument("n_rx must be positive");
  if (!(column_pfa > 0.0 && column_pfa < 1.0)) throw std::invalid_argument("false alarm must lie in (0, 1)");
  // 1 - (1 - f)^n_rx = pfa, solved for the per-bin rate f = exp(-tau).
  const double f = -std::expm1(std::log1p(-column_pfa) / n_rx);
  return -std::log(f);
}

DetectorModel calibrate_detector(const ChannelConfig& cfg, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("detector threshold must be positive");
  DetectorModel det;
  det.tau = tau;
  det.snr_eff = effective_snr(cfg);
  det.n_rx = cfg.n_rx;

  const double keep_empty = -std::expm1(-tau);  // 1 - f
  // Bin holding m coherent paths: energy/noise ~ Exp(1 + m * snr).
  auto miss = [&](int m) { return -std::expm1(-tau / (1.0 + m * det.snr_eff)); };

  det.d.assign(static_cast<std::size_t>(cfg.n_paths) + 1, 0.0);
  for (int k = 0; k <= cfg.n_paths; ++k) {
    // Expected no-fire probability over the uniform row assignment of k
    // paths, enumerated as a sequence of "join an occupied row / open a new
    // row" choices.
    std::vector<int> mult;
    std::function<double(int)> walk = [&](int placed) -> double {
      if (placed == k) {
        double p = std::pow(keep_empty, cfg.n_rx - static_cast<int>(mult.size()));
        for (int m : mult) p *= miss(m);
        return p;
      }
      double acc = 0.0;
      for (std::size_t r = 0; r < mult.size(); ++r) {
        ++mult[r];
        acc += walk(placed + 1) / cfg.n_rx;
        --mult[r];
      }
      const int free_rows = cfg.n_rx - static_cast<int>(mult.size());
      if (free_rows > 0) {
        mult.push_back(1);
        acc += walk(placed + 1) * free_rows / cfg.n_rx;
        mult.pop_back();
      }
      return acc;
    };
    det.d[k] = 1.0 - walk(0);
  }
  // Round-off can break monotonicity by an ulp when snr_eff == 0.
  for (std::size_t k = 1; k < det.d.size(); ++k) det.d[k] = std::max(det.d[k], det.d[k - 1]);
  return det;
}

DetectorModel default_detector(const ChannelConfig& cfg) {
  return calibrate_detector(cfg, threshold_for_false_alarm(cfg.n_rx, cfg.false_alarm));
}

void write_detector(std::ostream& out, const DetectorModel& det) {
  out << "# beampomdp detector v1\n";
  out << "tau = " << format_double(det.tau) << "\n";
  out << "snr_eff = " << format_double(det.snr_eff) << "\n";
  out << "n_rx = " << det.n_rx << "\n";
  out << "bin_false_alarm = " << format_double(det.bin_false_alarm()) << "\n";
  out << "d =";
  for (double p : det.d) out << ' ' << format_double(p);
  out << "\n";
}

DetectorModel read_detector(std::istream& in) {
  DetectorModel det;
  bool have_d = false;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ConfigError("detector file: expected 'key = value'");
    }
    std::istringstream key_in(line.substr(0, eq));
    std::string key;
    key_in >> key;
    std::istringstream value(line.substr(eq + 1));
    value.imbue(std::locale::classic());
    if (key == "tau") value >> det.tau;
    else if (key == "snr_eff") value >> det.snr_eff;
    else if (key == "n_rx") value >> det.n_rx;
    else if (key == "bin_false_alarm") continue;
    else if (key == "d") {
      double p;
      while (value >> p) det.d.push_back(p);
      have_d = true;
      continue;
    } else {
      throw ConfigError("detector file: unknown key '" + key + "'");
    }
    if (value.fail()) throw ConfigError("detector file: bad value for '" + key + "'");
  }
  if (!have_d) throw ConfigError("detector file: missing d table");
  auto checked = DetectorModel::from_table(det.d);
  checked.tau = det.tau;
  checked.snr_eff = det.snr_eff;
  checked.n_rx = det.n_rx;
  return checked;
}

void save_detector(const std::filesystem::path& path, const DetectorModel& det) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_detector(out, det);
}

DetectorModel load_detector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_detector(in);
}

SenseResult sense_columns(const ChannelRealization& realization, const ActionVector& action,
                          const DetectorModel& detector, Rng& rng, const ChannelConfig& cfg) {
  const VirtualChannel h = realization.matrix(cfg.n_rx, cfg.n_tx);
  // The pilot's beamforming gain scales the bin amplitude so that
  // E|amp * h|^2 / noise_var == snr_eff.
  const double amp = std::sqrt(detector.snr_eff * cfg.noise_var / cfg.gain_var);
  const double shrink = detector.snr_eff / (1.0 + detector.snr_eff);
  const double threshold = detector.tau * cfg.noise_var;

  SenseResult result;
  result.obs.size = static_cast<int>(action.size());
  for (std::size_t m = 0; m < action.size(); ++m) {
    const int col = action.cols[m];
    bool fired = false;
    for (int r = 0; r < cfg.n_rx; ++r) {
      const std::complex<double> y = amp * h.at(r, col) + complex_gaussian(rng, cfg.noise_var);
      if (std::norm(y) > threshold) {
        fired = true;
        const std::complex<double> est = amp > 0.0 ? shrink * y / amp : std::complex<double>{};
        result.gains.push_back(GainEstimate{static_cast<int>(m), r, col, est});
      }
    }
    if (fired) result.obs.bits |= 1U << m;
  }
  return result;
}

int count_bins(const CompositeState& state, int col) {
  return static_cast<int>(std::count(state.cols.begin(), state.cols.end(), col));
}

double observation_prob(const CompositeState& state, const ActionVector& action,
                        const ObservationVector& obs, const DetectorModel& detector) {
  double q = 1.0;
  for (std::size_t m = 0; m < action.size(); ++m) {
    const double d = detector.detect(count_bins(state, action.cols[m]));
    q *= obs[static_cast<int>(m)] ? d : 1.0 - d;
  }
  return q;
}

}  // namespace beampomdp
