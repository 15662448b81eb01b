#include "tdrp/encoder.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "tdrp/stats.hpp"

namespace tdrp {

void TdrpConfig::Validate() const {
  if (step < 1) throw std::invalid_argument("TdrpConfig: step must be >= 1");
  if (embedding_dim < 1) throw std::invalid_argument("TdrpConfig: embedding_dim must be >= 1");
  if (margin <= 0.0) throw std::invalid_argument("TdrpConfig: margin must be > 0");
  if (anchors_per_update < 1 || pairs_per_anchor < 1) {
    throw std::invalid_argument("TdrpConfig: batch sizes must be >= 1");
  }
  if (grad_steps_per_round < 0) {
    throw std::invalid_argument("TdrpConfig: grad_steps_per_round must be >= 0");
  }
  if (learning_rate <= 0.0) throw std::invalid_argument("TdrpConfig: learning_rate must be > 0");
}

ContrastSets BuildContrastSets(const Trajectory& trajectory, int t, int step) {
  int last = trajectory.num_states() - 1;
  if (t < 0 || t > last) throw std::out_of_range("BuildContrastSets: t out of range");
  if (step < 1) throw std::invalid_argument("BuildContrastSets: step must be >= 1");
  ContrastSets sets;
  for (int i = t + 1; i <= std::min(t + step, last); ++i) sets.positives.push_back(i);
  for (int i = t + step + 1; i <= std::min(t + 2 * step, last); ++i) sets.negatives.push_back(i);
  return sets;
}

int ValidAnchorCount(const Trajectory& trajectory, int step) {
  // anchors t with a non-empty negative set: t + step + 1 <= last state index
  int last = trajectory.num_states() - 1;
  return std::max(0, last - step);
}

double TripletLoss(const Vector& anchor_emb, std::span<const Vector> positive_embs,
                   std::span<const Vector> negative_embs, double margin) {
  if (positive_embs.empty() || negative_embs.empty()) {
    throw std::invalid_argument("TripletLoss: positive and negative sets must be non-empty");
  }
  double loss = 0.0;
  for (const Vector& p : positive_embs) loss += Distance(anchor_emb, p);
  for (const Vector& n : negative_embs) loss += std::max(margin - Distance(anchor_emb, n), 0.0);
  if (!std::isfinite(loss)) throw std::runtime_error("TripletLoss: non-finite loss");
  return loss;
}

ContrastBatch SampleContrastBatch(std::span<const Trajectory* const> buffer,
                                  const TdrpConfig& config, Rng& rng) {
  // cumulative valid-anchor counts for uniform sampling over (trajectory, t)
  std::vector<int> counts;
  counts.reserve(buffer.size());
  long total = 0;
  for (const Trajectory* traj : buffer) {
    int c = ValidAnchorCount(*traj, config.step);
    counts.push_back(c);
    total += c;
  }
  if (total == 0) {
    throw std::runtime_error(
        "SampleContrastBatch: no valid anchors (trajectories shorter than step+2)");
  }
  ContrastBatch batch;
  batch.reserve(config.anchors_per_update);
  for (int a = 0; a < config.anchors_per_update; ++a) {
    long pick = rng.NextInt(static_cast<int>(total));
    std::size_t ti = 0;
    while (pick >= counts[ti]) {
      pick -= counts[ti];
      ++ti;
    }
    const Trajectory& traj = *buffer[ti];
    int t = static_cast<int>(pick);
    ContrastSets sets = BuildContrastSets(traj, t, config.step);
    ContrastItem item;
    item.anchor = &traj.state_at(t);
    for (int k = 0; k < config.pairs_per_anchor; ++k) {
      item.positives.push_back(&traj.state_at(sets.positives[rng.NextInt(
          static_cast<int>(sets.positives.size()))]));
      item.negatives.push_back(&traj.state_at(sets.negatives[rng.NextInt(
          static_cast<int>(sets.negatives.size()))]));
    }
    batch.push_back(std::move(item));
  }
  return batch;
}

double ContrastBatchLoss(const MlpParams& net, const ContrastBatch& batch,
                         double margin, MlpParams* grad) {
  if (batch.empty()) throw std::invalid_argument("ContrastBatchLoss: empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  ForwardCache anchor_cache, pair_cache;
  for (const ContrastItem& item : batch) {
    Vector a = MlpForwardCached(net, *item.anchor, anchor_cache);
    Vector grad_anchor(a.size());
    for (const Vector* p : item.positives) {
      Vector e = grad ? MlpForwardCached(net, *p, pair_cache) : MlpForward(net, *p);
      Vector diff = a - e;
      double dist = diff.Norm();
      total += scale * dist;
      if (grad && dist > 1e-12) {
        Vector g = diff * (scale / dist);
        grad_anchor += g;
        g *= -1.0;
        MlpBackward(net, pair_cache, g, *grad);
      }
    }
    for (const Vector* nstate : item.negatives) {
      Vector e = grad ? MlpForwardCached(net, *nstate, pair_cache) : MlpForward(net, *nstate);
      Vector diff = a - e;
      double dist = diff.Norm();
      double hinge = margin - dist;
      if (hinge > 0.0) {
        total += scale * hinge;
        if (grad && dist > 1e-12) {
          Vector g = diff * (-scale / dist);
          grad_anchor += g;
          g *= -1.0;
          MlpBackward(net, pair_cache, g, *grad);
        }
      }
    }
    if (grad) MlpBackward(net, anchor_cache, grad_anchor, *grad);
  }
  if (!std::isfinite(total)) throw std::runtime_error("ContrastBatchLoss: non-finite loss");
  return total;
}

Encoder::Encoder(int state_dim, TdrpConfig config, std::uint64_t init_seed)
    : config_(std::move(config)) {
  config_.Validate();
  std::vector<int> sizes;
  sizes.push_back(state_dim);
  for (int s : config_.layer_sizes) sizes.push_back(s);
  sizes.push_back(config_.embedding_dim);
  Rng rng(init_seed);
  net_ = MlpParams::Init(sizes, Activation::kTanh, Activation::kIdentity, rng);
  adam_ = AdamState(net_.ParameterCount(), AdamConfig{.learning_rate = config_.learning_rate});
}

Encoder::Encoder(TdrpConfig config, MlpParams net, int rounds)
    : config_(std::move(config)), net_(std::move(net)), rounds_(rounds) {
  config_.Validate();
  if (net_.output_dim() != config_.embedding_dim) {
    throw std::invalid_argument("Encoder: network output does not match embedding_dim");
  }
  adam_ = AdamState(net_.ParameterCount(), AdamConfig{.learning_rate = config_.learning_rate});
}

Vector Encoder::Encode(const Vector& state) const { return MlpForward(net_, state); }

double Encoder::EmbeddingDistance(const Vector& s1, const Vector& s2) const {
  return Distance(Encode(s1), Encode(s2));
}

TrainStats Encoder::Train(std::span<const Trajectory* const> buffer, std::uint64_t seed) {
  TrainStats stats;
  if (config_.grad_steps_per_round == 0) {
    ++rounds_;
    return stats;
  }
  Rng rng(seed);
  MlpParams grad = net_.ZerosLike();
  for (int step = 0; step < config_.grad_steps_per_round; ++step) {
    ContrastBatch batch = SampleContrastBatch(buffer, config_, rng);
    grad.SetZero();
    double loss = ContrastBatchLoss(net_, batch, config_.margin, &grad);
    AdamStep(net_, grad, adam_);
    stats.losses.push_back(loss);
  }
  stats.initial_loss = stats.losses.front();
  stats.final_loss = stats.losses.back();
  ++rounds_;
  return stats;
}

double TrainStats::MeanLoss() const {
  if (losses.empty()) return 0.0;
  return Mean(losses);
}

void ExportEmbeddingsCsv(const Encoder& encoder,
                         std::span<const Trajectory* const> trajectories,
                         std::ostream& out) {
  out << "trajectory_id,t";
  for (int d = 0; d < encoder.config().embedding_dim; ++d) out << ",emb_" << d;
  out << "\n";
  char buf[64];
  int traj_id = 0;
  for (const Trajectory* traj : trajectories) {
    for (int t = 0; t < traj->num_states(); ++t) {
      Vector emb = encoder.Encode(traj->state_at(t));
      out << traj_id << "," << t;
      for (int d = 0; d < emb.size(); ++d) {
        std::snprintf(buf, sizeof(buf), "%.17g", emb[d]);
        out << "," << buf;
      }
      out << "\n";
    }
    ++traj_id;
  }
}

}  // namespace tdrp
