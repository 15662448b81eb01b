#ifndef TDRP_MLP_HPP_
#define TDRP_MLP_HPP_

#include <span>
#include <string>
#include <vector>

#include "tdrp/rng.hpp"
#include "tdrp/vec.hpp"

namespace tdrp {

enum class Activation { kIdentity, kTanh, kRelu };

std::string ActivationName(Activation a);
Activation ActivationFromName(const std::string& name);

struct MlpLayer {
  Matrix weight;  // out × in
  Vector bias;    // out
};

// Feed-forward network parameters. Also serves as the gradient holder: a
// gradient has exactly the shape of the parameters it differentiates.
class MlpParams {
 public:
  MlpParams() = default;
  // sizes = {in, hidden..., out}; weights and biases start at zero
  MlpParams(const std::vector<int>& sizes, Activation hidden, Activation output);
  // uniform ±sqrt(6 / (fan_in + fan_out)) initialization from a seeded generator
  static MlpParams Init(const std::vector<int>& sizes, Activation hidden,
                        Activation output, Rng& rng);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  const MlpLayer& layer(int i) const { return layers_[i]; }
  MlpLayer& layer(int i) { return layers_[i]; }
  int input_dim() const;
  int output_dim() const;
  std::vector<int> sizes() const;
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  std::size_t ParameterCount() const;
  MlpParams ZerosLike() const;
  void SetZero();
  void AddScaled(const MlpParams& rhs, double s);
  void Scale(double s);
  bool IsFinite() const;

  // canonical flat order: per layer, weight rows then bias
  void FlattenTo(std::vector<double>& out) const;
  void LoadFlat(std::span<const double> flat);

  bool operator==(const MlpParams& rhs) const;

 private:
  std::vector<MlpLayer> layers_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kIdentity;
};

// Per-layer intermediate values kept for backprop. act[0] is the input,
// act[i] the post-activation output of layer i-1; pre[i] the pre-activation
// of layer i.
struct ForwardCache {
  std::vector<Vector> pre;
  std::vector<Vector> act;
};

// Pure forward pass; throws on dimension mismatch or non-finite input/output.
Vector MlpForward(const MlpParams& params, const Vector& input);
Vector MlpForwardCached(const MlpParams& params, const Vector& input, ForwardCache& cache);

// Backpropagates grad_output through the cached pass, accumulating parameter
// gradients into grad (which must be ZerosLike-shaped or previously
// accumulated). Returns the gradient with respect to the input.
Vector MlpBackward(const MlpParams& params, const ForwardCache& cache,
                   const Vector& grad_output, MlpParams& grad);

}  // namespace tdrp

#endif  // TDRP_MLP_HPP_
