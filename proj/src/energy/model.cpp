#include "airan/energy/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace airan::energy {

void EnergyProfile::validate() const {
  const double coeffs[] = {pa_slope,     pa_intercept, transceiver_w,
                           digital_if_w, baseband_w,   static_w};
  for (double c : coeffs)
    if (!(c >= 0.0) || !std::isfinite(c))
      raise(Errc::ValidationError, "energy coefficients must be non-negative");
}

void ActivityTrace::validate() const {
  if (slot_seconds <= 0.0) raise(Errc::ValidationError, "slot length must be positive");
  if (max_channels < 1 || max_carriers < 1)
    raise(Errc::ValidationError, "station dimensioning must be at least one");
  const std::size_t t = slots();
  for (std::size_t n = 0; n < stations.size(); ++n) {
    const StationActivity& s = stations[n];
    if (s.channels.size() != t || s.carriers.size() != t || s.tx_power_w.size() != t)
      raise(Errc::DimensionMismatch,
            "station " + std::to_string(n) + " series length differs from " + std::to_string(t));
    for (std::size_t i = 0; i < t; ++i) {
      if (s.channels[i] < 0 || s.channels[i] > max_channels)
        raise(Errc::ValidationError, "channel count outside [0, M]");
      if (s.carriers[i] < 0 || s.carriers[i] > max_carriers)
        raise(Errc::ValidationError, "carrier count outside [0, C]");
      if (!(s.tx_power_w[i] >= 0.0) || !std::isfinite(s.tx_power_w[i]))
        raise(Errc::ValidationError, "transmit power must be non-negative");
      if (s.tx_power_w[i] > 0.0 && s.channels[i] == 0)
        raise(Errc::ValidationError, "transmit power with no active channel");
    }
  }
}

PowerBreakdown slot_power(int channels, int carriers, double tx_power_w,
                          const EnergyProfile& profile) {
  PowerBreakdown p;
  if (channels > 0) {
    // Sum over active channels of (intercept + slope * P/m) collapses to
    // m * intercept + slope * P.
    p.pa = channels * profile.pa_intercept + profile.pa_slope * tx_power_w;
    p.transceiver = channels * profile.transceiver_w;
    p.digital_if = static_cast<double>(channels) * carriers * profile.digital_if_w;
  }
  p.baseband = carriers * profile.baseband_w;
  p.static_floor = profile.static_w;
  return p;
}

double total_energy(const ActivityTrace& trace, const EnergyProfile& profile) {
  trace.validate();
  profile.validate();
  double joules = 0.0;  // fixed sequential reduction order for reproducibility
  for (const StationActivity& s : trace.stations)
    for (std::size_t t = 0; t < s.channels.size(); ++t)
      joules += slot_power(s.channels[t], s.carriers[t], s.tx_power_w[t], profile).total() *
                trace.slot_seconds;
  return joules;
}

std::string to_string(EsPolicyKind k) {
  switch (k) {
    case EsPolicyKind::Baseline: return "BASELINE";
    case EsPolicyKind::StaticThreshold: return "STATIC_THRESHOLD";
    case EsPolicyKind::Predictive: return "PREDICTIVE";
    case EsPolicyKind::ServiceAware: return "SERVICE_AWARE";
  }
  raise(Errc::Internal, "bad policy kind");
}

void EsPolicy::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0))
    raise(Errc::ValidationError, "threshold must be inside (0, 1)");
  if (window_start < 0 || window_end <= window_start)
    raise(Errc::ValidationError, "slot-of-day window must be non-empty");
  if (!(margin >= 0.0)) raise(Errc::ValidationError, "margin must be non-negative");
  if (seasonal_periods < 1) raise(Errc::ValidationError, "need at least one seasonal period");
  if (period_slots < 1) raise(Errc::ValidationError, "period must be positive");
  if (aggregation_window < 1) raise(Errc::ValidationError, "aggregation window must be positive");
  if (aggregation_window - 1 > tolerance_slots)
    raise(Errc::ValidationError, "aggregation window breaks the deferral tolerance");
  if (!(eligible_share > 0.0 && eligible_share <= 1.0))
    raise(Errc::ValidationError, "eligible share must be inside (0, 1]");
}

void CellConfig::validate() const {
  if (max_channels < 1 || max_carriers < 1)
    raise(Errc::ValidationError, "cell dimensioning must be at least one");
  if (!(max_tx_w > 0.0)) raise(Errc::ValidationError, "max transmit power must be positive");
  if (!(slot_seconds > 0.0)) raise(Errc::ValidationError, "slot length must be positive");
}

namespace {

// Mean of the same slot position over up to k past periods; falls back to
// the actual value when no past period exists yet (start of the series).
double seasonal_estimate(const std::vector<double>& series, std::size_t t, std::size_t period,
                         int k) {
  double sum = 0.0;
  int n = 0;
  for (int j = 1; j <= k; ++j) {
    const std::size_t lag = static_cast<std::size_t>(j) * period;
    if (lag > t) break;
    sum += series[t - lag];
    ++n;
  }
  return n == 0 ? series[t] : sum / n;
}

void set_slot(StationActivity& s, std::size_t t, int m, int c, double p) {
  s.channels[t] = m;
  s.carriers[t] = c;
  s.tx_power_w[t] = p;
}

// Wake exactly the resources the load needs, keeping one channel and one
// carrier up for coverage.
void set_scaled(StationActivity& s, std::size_t t, double load, const CellConfig& cfg) {
  const int m = std::max(1, static_cast<int>(std::ceil(cfg.max_channels * load)));
  const int c = std::max(1, static_cast<int>(std::ceil(cfg.max_carriers * load)));
  set_slot(s, t, m, c, cfg.max_tx_w * load);
}

}  // namespace

PolicyResult apply_policy(const EsPolicy& policy, const std::vector<double>& load,
                          const std::vector<double>& delay_tolerant_share,
                          const CellConfig& cfg) {
  policy.validate();
  cfg.validate();
  if (load.size() != delay_tolerant_share.size())
    raise(Errc::SeriesLengthMismatch, "load series has " + std::to_string(load.size()) +
                                          " slots, app mix has " +
                                          std::to_string(delay_tolerant_share.size()));
  for (std::size_t t = 0; t < load.size(); ++t) {
    if (!(load[t] >= 0.0 && load[t] <= 1.0))
      raise(Errc::ValidationError, "load outside [0, 1] at slot " + std::to_string(t));
    if (!(delay_tolerant_share[t] >= 0.0 && delay_tolerant_share[t] <= 1.0))
      raise(Errc::ValidationError, "share outside [0, 1] at slot " + std::to_string(t));
  }

  PolicyResult out;
  out.trace.slot_seconds = cfg.slot_seconds;
  out.trace.max_channels = cfg.max_channels;
  out.trace.max_carriers = cfg.max_carriers;
  out.trace.stations.resize(1);
  StationActivity& s = out.trace.stations[0];
  s.channels.resize(load.size());
  s.carriers.resize(load.size());
  s.tx_power_w.resize(load.size());

  for (std::size_t t = 0; t < load.size(); ++t) {
    bool scale = false;
    switch (policy.kind) {
      case EsPolicyKind::Baseline:
        break;
      case EsPolicyKind::StaticThreshold: {
        const int sod = static_cast<int>(t % static_cast<std::size_t>(policy.period_slots));
        scale = sod >= policy.window_start && sod < policy.window_end &&
                load[t] < policy.threshold;
        break;
      }
      case EsPolicyKind::Predictive:
      case EsPolicyKind::ServiceAware: {
        const double predicted = seasonal_estimate(
            load, t, static_cast<std::size_t>(policy.period_slots), policy.seasonal_periods);
        // Scale on a low forecast, but abort when the live load runs past
        // the forecast by more than the margin.
        scale = predicted < policy.threshold && load[t] <= predicted + policy.margin;
        break;
      }
    }
    if (scale)
      set_scaled(s, t, load[t], cfg);
    else
      set_slot(s, t, cfg.max_channels, cfg.max_carriers, cfg.max_tx_w * load[t]);
  }

  if (policy.kind == EsPolicyKind::ServiceAware) {
    const std::size_t w = static_cast<std::size_t>(policy.aggregation_window);
    for (std::size_t start = 0; start + w <= load.size(); start += w) {
      bool eligible = true;
      double sum = 0.0;
      for (std::size_t t = start; t < start + w; ++t) {
        eligible = eligible && delay_tolerant_share[t] >= policy.eligible_share;
        sum += load[t];
      }
      // The aggregated burst must still fit one slot, and the earliest
      // deferred packet must not wait past its tolerance.
      if (!eligible || sum > 1.0) continue;
      const std::size_t emit = start + w - 1;
      if (emit - start > static_cast<std::size_t>(policy.tolerance_slots)) continue;
      for (std::size_t t = start; t < emit; ++t) {
        set_slot(s, t, 0, 0, 0.0);
        out.deferrals.push_back({t, emit, load[t], true});
      }
      set_scaled(s, emit, std::min(sum, 1.0), cfg);
    }
  }

  out.trace.validate();
  return out;
}

std::vector<double> predict_load(const std::vector<double>& history, std::size_t horizon_slots,
                                 std::size_t period_slots, int k) {
  if (period_slots == 0) raise(Errc::ValidationError, "period must be positive");
  if (k < 1) raise(Errc::ValidationError, "need at least one seasonal period");
  if (history.size() < period_slots)
    raise(Errc::InsufficientHistory, "history shorter than one period");
  std::vector<double> out;
  out.reserve(horizon_slots);
  for (std::size_t i = 0; i < horizon_slots; ++i) {
    const std::size_t pos = history.size() + i;
    double sum = 0.0;
    int n = 0;
    for (int j = 1; j <= k; ++j) {
      const std::size_t lag = static_cast<std::size_t>(j) * period_slots;
      if (lag > pos) break;
      const std::size_t idx = pos - lag;
      if (idx >= history.size()) continue;  // lands in the forecast itself
      sum += history[idx];
      ++n;
    }
    if (n == 0)
      raise(Errc::InsufficientHistory,
            "no same-position sample for forecast slot " + std::to_string(i));
    out.push_back(sum / n);
  }
  return out;
}

std::vector<double> diurnal_loads(int days) {
  if (days < 1) raise(Errc::ValidationError, "need at least one day");
  std::vector<double> load;
  load.reserve(static_cast<std::size_t>(days) * 96);
  for (int d = 0; d < days; ++d)
    for (int s = 0; s < 96; ++s)
      load.push_back(0.45 - 0.30 * std::cos(2.0 * std::numbers::pi * s / 96.0));
  return load;
}

std::vector<double> night_tolerant_share(const std::vector<double>& load, double night_threshold,
                                         double day_share) {
  std::vector<double> share;
  share.reserve(load.size());
  for (double l : load) share.push_back(l < night_threshold ? 1.0 : day_share);
  return share;
}

}  // namespace airan::energy
