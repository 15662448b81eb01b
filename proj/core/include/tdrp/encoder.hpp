#ifndef TDRP_ENCODER_HPP_
#define TDRP_ENCODER_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tdrp/adam.hpp"
#include "tdrp/mlp.hpp"
#include "tdrp/trajectory.hpp"

namespace tdrp {

struct TdrpConfig {
  int step = 50;                 // window size for positive/negative sets
  int embedding_dim = 16;
  std::vector<int> layer_sizes = {64, 64};  // hidden layers
  double margin = 1.0;
  int anchors_per_update = 64;   // minibatch anchors per gradient step
  int grad_steps_per_round = 200;
  int pairs_per_anchor = 4;      // positives and negatives sampled per anchor
  double learning_rate = 1e-3;

  void Validate() const;
};

// Positive/negative state indices for an anchor at t: positives are the
// states within `step` transitions after t, negatives the states between
// step+1 and 2*step transitions after t. Windows never cross the episode
// boundary; an anchor whose negative set is empty is excluded from batches.
struct ContrastSets {
  std::vector<int> positives;
  std::vector<int> negatives;
};

ContrastSets BuildContrastSets(const Trajectory& trajectory, int t, int step);

// Sampled training batch: anchors with `pairs` positives and negatives each.
struct ContrastItem {
  const Vector* anchor;
  std::vector<const Vector*> positives;
  std::vector<const Vector*> negatives;
};
using ContrastBatch = std::vector<ContrastItem>;

// Per-anchor objective: sum over positives of ‖a−p‖₂ plus sum over negatives
// of max(margin − ‖a−n‖₂, 0). The trainer averages this over anchors.
double TripletLoss(const Vector& anchor_emb, std::span<const Vector> positive_embs,
                   std::span<const Vector> negative_embs, double margin);

struct TrainStats {
  std::vector<double> losses;  // mean loss per gradient step
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double MeanLoss() const;
};

// State encoder whose embedding distance tracks how many environment
// transitions separate two states.
class Encoder {
 public:
  Encoder(int state_dim, TdrpConfig config, std::uint64_t init_seed);
  // reassembly from stored parameters (checkpoint loading)
  Encoder(TdrpConfig config, MlpParams net, int rounds);

  Vector Encode(const Vector& state) const;
  double EmbeddingDistance(const Vector& s1, const Vector& s2) const;

  // One training round: grad_steps_per_round Adam steps on minibatches of
  // anchors sampled uniformly over all valid (trajectory, t) pairs.
  TrainStats Train(std::span<const Trajectory* const> buffer, std::uint64_t seed);

  const MlpParams& params() const { return net_; }
  MlpParams& mutable_params() { return net_; }
  const TdrpConfig& config() const { return config_; }
  int rounds() const { return rounds_; }
  int state_dim() const { return net_.input_dim(); }

 private:
  TdrpConfig config_;
  MlpParams net_;
  AdamState adam_;
  int rounds_ = 0;
};

// Mean triplet loss over a sampled batch, with the analytic parameter
// gradient accumulated into `grad` when non-null.
double ContrastBatchLoss(const MlpParams& net, const ContrastBatch& batch,
                         double margin, MlpParams* grad);

// Number of anchors in the trajectory with a non-empty negative set.
int ValidAnchorCount(const Trajectory& trajectory, int step);

ContrastBatch SampleContrastBatch(std::span<const Trajectory* const> buffer,
                                  const TdrpConfig& config, Rng& rng);

// CSV with columns trajectory_id,t,emb_0..emb_{d-1}.
void ExportEmbeddingsCsv(const Encoder& encoder,
                         std::span<const Trajectory* const> trajectories,
                         std::ostream& out);

}  // namespace tdrp

#endif  // TDRP_ENCODER_HPP_
