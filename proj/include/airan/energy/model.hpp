#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airan/error.hpp"

namespace airan::energy {

/// Power sub-model coefficients for one station. All affine in their
/// activity arguments so the total stays exactly checkable against a
/// nested-loop summation.
struct EnergyProfile {
  double pa_slope = 1.2;       // W per W of per-channel transmit power
  double pa_intercept = 5.0;   // W per active channel
  double transceiver_w = 8.0;  // W per active channel
  double digital_if_w = 3.0;   // W per active (channel, carrier) pair
  double baseband_w = 15.0;    // W per active carrier
  double static_w = 60.0;      // always-on floor per station, W

  void validate() const;  // all coefficients non-negative
};

/// Per-slot activity of one station: active channel count m(t), active
/// carrier count c(t), and the station's total transmit power P(t) split
/// evenly across its active channels.
struct StationActivity {
  std::vector<int> channels;
  std::vector<int> carriers;
  std::vector<double> tx_power_w;
};

struct ActivityTrace {
  double slot_seconds = 900.0;
  int max_channels = 4;  // spatial domain size M
  int max_carriers = 2;  // frequency domain size C
  std::vector<StationActivity> stations;

  std::size_t slots() const { return stations.empty() ? 0 : stations.front().channels.size(); }
  /// DimensionMismatch for ragged series; ValidationError for counts or
  /// powers outside [0, max] or transmit power with zero channels.
  void validate() const;
};

/// One slot's power split by component, in watts.
struct PowerBreakdown {
  double pa = 0.0;
  double transceiver = 0.0;
  double digital_if = 0.0;
  double baseband = 0.0;
  double static_floor = 0.0;

  double total() const { return pa + transceiver + digital_if + baseband + static_floor; }
};

/// Instantaneous power of one station slot: per-channel PA, transceiver,
/// and digital-IF terms summed over the m active channels, plus the
/// carrier baseband term and the static floor.
PowerBreakdown slot_power(int channels, int carriers, double tx_power_w,
                          const EnergyProfile& profile);

/// Total energy in joules over all stations and slots.
double total_energy(const ActivityTrace& trace, const EnergyProfile& profile);

enum class EsPolicyKind : std::uint8_t { Baseline, StaticThreshold, Predictive, ServiceAware };

std::string to_string(EsPolicyKind k);

/// Energy-saving policy. StaticThreshold scales down inside a fixed
/// slot-of-day window; Predictive scales wherever the seasonal forecast is
/// low and the actual load stays within the forecast margin; ServiceAware
/// additionally aggregates fully delay-tolerant windows into one emit slot,
/// silencing the rest.
struct EsPolicy {
  EsPolicyKind kind = EsPolicyKind::Baseline;
  double threshold = 0.3;  // scale-down trigger on load fraction
  int window_start = 0;    // StaticThreshold slot-of-day window [start, end)
  int window_end = 24;
  double margin = 0.05;        // Predictive abort guard on forecast misses
  int seasonal_periods = 3;    // forecast averages this many past periods
  int period_slots = 96;       // slots per season (15-minute slots per day)
  int aggregation_window = 4;  // ServiceAware window length in slots
  int tolerance_slots = 3;     // max deferral any aggregated packet may see
  double eligible_share = 1.0; // min delay-tolerant share for aggregation

  void validate() const;
};

/// Cell dimensioning used to map a load fraction onto activity.
struct CellConfig {
  int max_channels = 4;
  int max_carriers = 2;
  double max_tx_w = 20.0;
  double slot_seconds = 900.0;

  void validate() const;
};

/// One deferred slot of traffic under ServiceAware aggregation.
struct Deferral {
  std::size_t src_slot = 0;
  std::size_t emit_slot = 0;
  double load = 0.0;
  bool delay_tolerant = true;  // source slot met the eligibility share
};

struct PolicyResult {
  ActivityTrace trace;  // single station
  std::vector<Deferral> deferrals;
};

/// Applies the policy to one station's load series. `delay_tolerant_share`
/// gives the per-slot fraction of traffic that can wait; both series must
/// have equal length (SeriesLengthMismatch otherwise). A window aggregates
/// only when every slot meets the eligibility share, the summed load still
/// fits one slot, and the longest deferral stays within the tolerance.
PolicyResult apply_policy(const EsPolicy& policy, const std::vector<double>& load,
                          const std::vector<double>& delay_tolerant_share,
                          const CellConfig& cfg);

/// Seasonal-naive forecast: the value for a future slot is the mean of the
/// same slot position over the last `k` seasons present in the history.
/// InsufficientHistory if the history is shorter than one period or a
/// requested slot has no same-position sample.
std::vector<double> predict_load(const std::vector<double>& history, std::size_t horizon_slots,
                                 std::size_t period_slots, int k = 3);

/// Canonical diurnal load shape: 0.45 - 0.30 * cos(2*pi*s/96) over
/// 15-minute slots, low at night, peaking mid-day.
std::vector<double> diurnal_loads(int days);

/// Delay-tolerance mix paired with diurnal_loads: traffic is entirely
/// delay-tolerant in low-load night slots and mostly interactive by day.
std::vector<double> night_tolerant_share(const std::vector<double>& load,
                                         double night_threshold = 0.3,
                                         double day_share = 0.2);

}  // namespace airan::energy
