#include "tdrp/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace tdrp {

std::string ActivationName(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  throw std::logic_error("ActivationName: unknown tag");
}

Activation ActivationFromName(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

void ApplyActivation(Activation a, const Vector& pre, Vector& out) {
  if (out.size() != pre.size()) out = Vector(pre.size());
  switch (a) {
    case Activation::kIdentity:
      out = pre;
      break;
    case Activation::kTanh:
      for (int i = 0; i < pre.size(); ++i) out[i] = std::tanh(pre[i]);
      break;
    case Activation::kRelu:
      for (int i = 0; i < pre.size(); ++i) out[i] = pre[i] > 0.0 ? pre[i] : 0.0;
      break;
  }
}

// dL/dpre = dL/dact ⊙ act'(pre), using the cached post-activation where the
// derivative is cheaper in terms of the output (tanh).
void ActivationBackward(Activation a, const Vector& pre, const Vector& act,
                        const Vector& grad_act, Vector& grad_pre) {
  if (grad_pre.size() != pre.size()) grad_pre = Vector(pre.size());
  switch (a) {
    case Activation::kIdentity:
      grad_pre = grad_act;
      break;
    case Activation::kTanh:
      for (int i = 0; i < pre.size(); ++i) grad_pre[i] = grad_act[i] * (1.0 - act[i] * act[i]);
      break;
    case Activation::kRelu:
      for (int i = 0; i < pre.size(); ++i) grad_pre[i] = pre[i] > 0.0 ? grad_act[i] : 0.0;
      break;
  }
}

}  // namespace

MlpParams::MlpParams(const std::vector<int>& sizes, Activation hidden, Activation output)
    : hidden_(hidden), output_(output) {
  if (sizes.size() < 2) throw std::invalid_argument("MlpParams: need at least in/out sizes");
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("MlpParams: layer sizes must be >= 1");
  }
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    layers_.push_back(MlpLayer{Matrix(sizes[i], sizes[i - 1]), Vector(sizes[i])});
  }
}

MlpParams MlpParams::Init(const std::vector<int>& sizes, Activation hidden,
                          Activation output, Rng& rng) {
  MlpParams p(sizes, hidden, output);
  for (auto& layer : p.layers_) {
    int fan_in = layer.weight.cols();
    int fan_out = layer.weight.rows();
    double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) layer.weight(r, c) = rng.NextUniform(-bound, bound);
    }
    // biases stay zero
  }
  return p;
}

int MlpParams::input_dim() const {
  if (layers_.empty()) throw std::logic_error("MlpParams: empty network");
  return layers_.front().weight.cols();
}

int MlpParams::output_dim() const {
  if (layers_.empty()) throw std::logic_error("MlpParams: empty network");
  return layers_.back().weight.rows();
}

std::vector<int> MlpParams::sizes() const {
  std::vector<int> out;
  out.push_back(input_dim());
  for (const auto& l : layers_) out.push_back(l.weight.rows());
  return out;
}

std::size_t MlpParams::ParameterCount() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.count() + static_cast<std::size_t>(l.bias.size());
  return n;
}

MlpParams MlpParams::ZerosLike() const {
  MlpParams out = *this;
  out.SetZero();
  return out;
}

void MlpParams::SetZero() {
  for (auto& l : layers_) {
    l.weight.Fill(0.0);
    l.bias.Fill(0.0);
  }
}

void MlpParams::AddScaled(const MlpParams& rhs, double s) {
  if (layers_.size() != rhs.layers_.size()) {
    throw std::invalid_argument("MlpParams::AddScaled: layer count mismatch");
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].weight.AddScaled(rhs.layers_[i].weight, s);
    layers_[i].bias.AddScaled(rhs.layers_[i].bias, s);
  }
}

void MlpParams::Scale(double s) {
  for (auto& l : layers_) {
    for (std::size_t i = 0; i < l.weight.count(); ++i) l.weight.data()[i] *= s;
    l.bias *= s;
  }
}

bool MlpParams::IsFinite() const {
  for (const auto& l : layers_) {
    if (!l.weight.IsFinite() || !l.bias.IsFinite()) return false;
  }
  return true;
}

void MlpParams::FlattenTo(std::vector<double>& out) const {
  out.clear();
  out.reserve(ParameterCount());
  for (const auto& l : layers_) {
    out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.count());
    out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
}

void MlpParams::LoadFlat(std::span<const double> flat) {
  if (flat.size() != ParameterCount()) {
    throw std::invalid_argument("MlpParams::LoadFlat: size mismatch");
  }
  std::size_t off = 0;
  for (auto& l : layers_) {
    for (std::size_t i = 0; i < l.weight.count(); ++i) l.weight.data()[i] = flat[off++];
    for (int i = 0; i < l.bias.size(); ++i) l.bias[i] = flat[off++];
  }
}

bool MlpParams::operator==(const MlpParams& rhs) const {
  if (layers_.size() != rhs.layers_.size() || hidden_ != rhs.hidden_ || output_ != rhs.output_) {
    return false;
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (!(layers_[i].weight == rhs.layers_[i].weight) ||
        !(layers_[i].bias == rhs.layers_[i].bias)) {
      return false;
    }
  }
  return true;
}

Vector MlpForwardCached(const MlpParams& params, const Vector& input, ForwardCache& cache) {
  if (input.size() != params.input_dim()) {
    throw std::invalid_argument("MlpForward: input dimension mismatch");
  }
  input.EnsureFinite("MlpForward input");
  int n = params.num_layers();
  cache.pre.resize(n);
  cache.act.resize(n + 1);
  cache.act[0] = input;
  for (int i = 0; i < n; ++i) {
    const MlpLayer& layer = params.layer(i);
    layer.weight.Apply(cache.act[i], layer.bias, cache.pre[i]);
    Activation a = (i + 1 == n) ? params.output_activation() : params.hidden_activation();
    ApplyActivation(a, cache.pre[i], cache.act[i + 1]);
  }
  cache.act[n].EnsureFinite("MlpForward output");
  return cache.act[n];
}

Vector MlpForward(const MlpParams& params, const Vector& input) {
  ForwardCache cache;
  return MlpForwardCached(params, input, cache);
}

Vector MlpBackward(const MlpParams& params, const ForwardCache& cache,
                   const Vector& grad_output, MlpParams& grad) {
  int n = params.num_layers();
  if (static_cast<int>(cache.pre.size()) != n || static_cast<int>(cache.act.size()) != n + 1) {
    throw std::invalid_argument("MlpBackward: cache does not match network");
  }
  if (grad_output.size() != params.output_dim()) {
    throw std::invalid_argument("MlpBackward: grad_output dimension mismatch");
  }
  Vector grad_act = grad_output;
  Vector grad_pre;
  for (int i = n - 1; i >= 0; --i) {
    Activation a = (i + 1 == n) ? params.output_activation() : params.hidden_activation();
    ActivationBackward(a, cache.pre[i], cache.act[i + 1], grad_act, grad_pre);
    grad.layer(i).bias += grad_pre;
    grad.layer(i).weight.AddOuter(grad_pre, cache.act[i]);
    Vector next(params.layer(i).weight.cols());
    params.layer(i).weight.ApplyTransposed(grad_pre, next);
    grad_act = std::move(next);
  }
  return grad_act;
}

}  // namespace tdrp
