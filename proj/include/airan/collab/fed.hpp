#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "airan/error.hpp"
#include "airan/sim/engine.hpp"

namespace airan::collab {

/// One client's contribution to a federated round.
struct LocalUpdate {
  sim::NodeId client;
  std::uint32_t round = 0;
  std::vector<double> weights;
  std::uint64_t sample_count = 1;
  double loss = 0.0;
};

/// Sample-count-weighted component-wise mean of the round's updates:
/// sum_i(n_i * w_i) / sum_i(n_i).
std::vector<double> fed_aggregate(const std::vector<LocalUpdate>& updates);

/// Supervised dataset for the linear model family used in federation:
/// prediction = w[0] + sum_j w[j+1] * x[j]. Convex least-squares objective,
/// so convergence is provable and checkable against a closed-form oracle.
struct Dataset {
  std::vector<std::vector<double>> x;  // feature rows, equal width
  std::vector<double> y;

  void validate() const;
  std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
  std::size_t size() const { return y.size(); }
  void append(const Dataset& other);
};

double mse(const std::vector<double>& weights, const Dataset& data);

/// `steps` full-batch gradient-descent steps from `start`.
std::vector<double> train_gd(std::vector<double> start, const Dataset& data,
                             std::uint32_t steps, double lr);

struct FineTuneResult {
  std::vector<double> local;
  bool update_sent = false;
  std::vector<double> delta;  // local - global, only when sent
  double local_loss = 0.0;
  double global_loss = 0.0;
};

/// Edge-side fine-tuning of a pre-trained global model on localized data.
/// The delta travels back only when local validation beats the global
/// model on the same data by more than `margin`.
FineTuneResult fine_tune(const std::vector<double>& global, const Dataset& local_data,
                         std::uint32_t steps, double lr, double margin);

struct FlClientConfig {
  sim::NodeId node;
  Dataset data;
  std::uint32_t local_steps = 1;
  double lr = 0.1;
};

struct FlRoundLog {
  std::uint32_t round = 0;
  std::vector<sim::NodeId> participants;
  std::vector<double> local_losses;  // in participant order
  double global_mse = 0.0;           // of the post-round global on pooled data
};

/// Federated-averaging protocol run over simulated links: the AI node
/// broadcasts the global model, clients train on their own data and send
/// updates back, and the aggregate becomes the next global. Every leg is
/// an engine message, so rounds pay latency and serialization like any
/// other traffic.
class FlCoordinator {
 public:
  FlCoordinator(sim::Engine& eng, std::vector<FlClientConfig> clients,
                std::vector<double> init_global, std::uint32_t rounds);

  /// Schedules the first broadcast. Throws NoParticipants without clients.
  void start();

  bool on_event(const sim::Event& ev);

  const std::vector<double>& global() const { return global_; }
  const std::vector<FlRoundLog>& log() const { return log_; }
  bool finished() const { return finished_; }
  const Dataset& pooled() const { return pooled_; }

 private:
  void broadcast(std::uint32_t round);
  std::uint64_t model_bits() const { return 64 * static_cast<std::uint64_t>(global_.size()); }

  sim::Engine& eng_;
  std::vector<FlClientConfig> clients_;
  std::vector<double> global_;
  std::uint32_t rounds_ = 0;
  std::uint32_t current_round_ = 0;
  std::vector<LocalUpdate> inbox_;
  std::vector<FlRoundLog> log_;
  Dataset pooled_;
  bool finished_ = false;
  bool started_ = false;
};

}  // namespace airan::collab
