#include "airan/collab/fed.hpp"

#include <algorithm>

namespace airan::collab {

std::vector<double> fed_aggregate(const std::vector<LocalUpdate>& updates) {
  if (updates.empty()) raise(Errc::EmptyRound, "no updates to aggregate");
  const std::size_t len = updates.front().weights.size();
  const std::uint32_t round = updates.front().round;
  std::uint64_t total = 0;
  for (const LocalUpdate& u : updates) {
    if (u.weights.size() != len)
      raise(Errc::LengthMismatch, "update from " + to_string(u.client) + " has length " +
                                      std::to_string(u.weights.size()) + ", expected " +
                                      std::to_string(len));
    if (u.round != round)
      raise(Errc::RoundMismatch, "update from " + to_string(u.client) + " is for round " +
                                     std::to_string(u.round) + ", expected " +
                                     std::to_string(round));
    if (u.sample_count < 1)
      raise(Errc::ValidationError, "sample_count must be at least 1");
    total += u.sample_count;
  }
  std::vector<double> out(len, 0.0);
  for (const LocalUpdate& u : updates) {
    const double w = static_cast<double>(u.sample_count) / static_cast<double>(total);
    for (std::size_t i = 0; i < len; ++i) out[i] += w * u.weights[i];
  }
  return out;
}

void Dataset::validate() const {
  if (x.size() != y.size())
    raise(Errc::LengthMismatch, "feature rows and labels differ in count");
  const std::size_t d = dim();
  for (const auto& row : x)
    if (row.size() != d) raise(Errc::LengthMismatch, "ragged feature rows");
}

void Dataset::append(const Dataset& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
}

namespace {

void check_fit(const std::vector<double>& weights, const Dataset& data) {
  data.validate();
  if (weights.size() != data.dim() + 1)
    raise(Errc::LengthMismatch, "weights must be feature dimension plus bias");
}

double predict(const std::vector<double>& w, const std::vector<double>& row) {
  double p = w[0];
  for (std::size_t j = 0; j < row.size(); ++j) p += w[j + 1] * row[j];
  return p;
}

}  // namespace

double mse(const std::vector<double>& weights, const Dataset& data) {
  check_fit(weights, data);
  if (data.size() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double e = predict(weights, data.x[i]) - data.y[i];
    sum += e * e;
  }
  return sum / static_cast<double>(data.size());
}

std::vector<double> train_gd(std::vector<double> start, const Dataset& data,
                             std::uint32_t steps, double lr) {
  check_fit(start, data);
  if (data.size() == 0) return start;
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  std::vector<double> grad(d + 1);
  for (std::uint32_t s = 0; s < steps; ++s) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double e = predict(start, data.x[i]) - data.y[i];
      grad[0] += e;
      for (std::size_t j = 0; j < d; ++j) grad[j + 1] += e * data.x[i][j];
    }
    const double scale = 2.0 * lr / static_cast<double>(n);
    for (std::size_t k = 0; k <= d; ++k) start[k] -= scale * grad[k];
  }
  return start;
}

FineTuneResult fine_tune(const std::vector<double>& global, const Dataset& local_data,
                         std::uint32_t steps, double lr, double margin) {
  FineTuneResult r;
  r.global_loss = mse(global, local_data);
  r.local = train_gd(global, local_data, steps, lr);
  r.local_loss = mse(r.local, local_data);
  if (r.global_loss - r.local_loss > margin) {
    r.update_sent = true;
    r.delta.resize(global.size());
    for (std::size_t i = 0; i < global.size(); ++i) r.delta[i] = r.local[i] - global[i];
  }
  return r;
}

FlCoordinator::FlCoordinator(sim::Engine& eng, std::vector<FlClientConfig> clients,
                             std::vector<double> init_global, std::uint32_t rounds)
    : eng_(eng), clients_(std::move(clients)), global_(std::move(init_global)),
      rounds_(rounds) {
  for (const FlClientConfig& c : clients_) {
    c.data.validate();
    if (c.data.dim() + 1 != global_.size())
      raise(Errc::LengthMismatch, "client " + to_string(c.node) + " data does not fit model");
    pooled_.append(c.data);
  }
}

void FlCoordinator::start() {
  if (clients_.empty()) raise(Errc::NoParticipants, "federated round without clients");
  if (started_) raise(Errc::ValidationError, "coordinator already started");
  started_ = true;
  broadcast(0);
}

void FlCoordinator::broadcast(std::uint32_t round) {
  current_round_ = round;
  inbox_.clear();
  auto shared = std::make_shared<const std::vector<double>>(global_);
  for (const FlClientConfig& c : clients_)
    eng_.send(sim::NodeId::ai_node(), c.node, sim::FlBroadcast{round, shared}, model_bits());
}

bool FlCoordinator::on_event(const sim::Event& ev) {
  if (const auto* b = std::get_if<sim::FlBroadcast>(&ev.payload)) {
    // A client received the global model: train locally, send the update.
    auto it = std::find_if(clients_.begin(), clients_.end(),
                           [&](const FlClientConfig& c) { return c.node == ev.dst; });
    if (it == clients_.end()) return false;
    const std::vector<double> local = train_gd(*b->weights, it->data, it->local_steps, it->lr);
    sim::FlUpdate up;
    up.round = b->round;
    up.client = it->node;
    up.weights = std::make_shared<const std::vector<double>>(local);
    up.sample_count = it->data.size();
    up.loss = mse(local, it->data);
    eng_.send(it->node, sim::NodeId::ai_node(), up, model_bits());
    return true;
  }
  const auto* up = std::get_if<sim::FlUpdate>(&ev.payload);
  if (!up || ev.dst != sim::NodeId::ai_node()) return false;

  if (up->round != current_round_)
    raise(Errc::RoundMismatch, "update for round " + std::to_string(up->round) +
                                   " while running round " + std::to_string(current_round_));
  inbox_.push_back({up->client, up->round, *up->weights, up->sample_count, up->loss});
  if (inbox_.size() < clients_.size()) return true;

  // Round complete: fold the updates into the next global.
  global_ = fed_aggregate(inbox_);
  FlRoundLog log;
  log.round = current_round_;
  for (const LocalUpdate& u : inbox_) {
    log.participants.push_back(u.client);
    log.local_losses.push_back(u.loss);
  }
  log.global_mse = mse(global_, pooled_);
  log_.push_back(std::move(log));

  if (current_round_ + 1 < rounds_)
    broadcast(current_round_ + 1);
  else
    finished_ = true;
  return true;
}

}  // namespace airan::collab
