#include "tdrp/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdrp {

namespace {

constexpr const char* kVersion = "tdrp-checkpoint v1";
constexpr const char* kFileName = "checkpoint.txt";

void WriteHex(std::ostream& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  out << buf;
}

void WriteValues(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    WriteHex(out, values[i]);
  }
  out << '\n';
}

std::vector<double> ReadValues(std::istream& in, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("checkpoint: truncated value stream");
    char* end = nullptr;
    out[i] = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw std::runtime_error("checkpoint: bad value '" + tok + "'");
    }
  }
  return out;
}

void WriteMlp(std::ostream& out, const std::string& name, const MlpParams& net) {
  out << name;
  for (int s : net.sizes()) out << ' ' << s;
  out << " hidden " << ActivationName(net.hidden_activation()) << " output "
      << ActivationName(net.output_activation()) << "\n";
  std::vector<double> flat;
  net.FlattenTo(flat);
  WriteValues(out, flat);
}

MlpParams ReadMlp(std::istream& in, const std::string& expected_name) {
  std::string name;
  in >> name;
  if (name != expected_name) {
    throw std::runtime_error("checkpoint: expected section '" + expected_name + "', got '" +
                             name + "'");
  }
  std::string line;
  std::getline(in, line);
  std::stringstream header(line);
  std::vector<int> sizes;
  std::string tok;
  std::string hidden_name, output_name;
  while (header >> tok) {
    if (tok == "hidden") {
      header >> hidden_name >> tok >> output_name;  // tok consumes "output"
      break;
    }
    sizes.push_back(std::stoi(tok));
  }
  if (sizes.size() < 2 || hidden_name.empty() || output_name.empty()) {
    throw std::runtime_error("checkpoint: malformed network header for " + expected_name);
  }
  MlpParams net(sizes, ActivationFromName(hidden_name), ActivationFromName(output_name));
  std::vector<double> flat = ReadValues(in, net.ParameterCount());
  net.LoadFlat(flat);
  return net;
}

}  // namespace

void SaveCheckpoint(const std::string& dir, const Policy& policy,
                    const Encoder& encoder, const GoalSet& goal_set) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + kFileName;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);

  out << kVersion << "\n";
  WriteMlp(out, "policy_mean", policy.mean_net());
  out << "log_std " << policy.log_std().size() << "\n";
  std::vector<double> ls(policy.log_std().data(),
                         policy.log_std().data() + policy.log_std().size());
  WriteValues(out, ls);
  WriteMlp(out, "policy_value", policy.value_net());

  const TdrpConfig& tc = encoder.config();
  out << "encoder_config " << tc.step << ' ' << tc.embedding_dim << ' ';
  WriteHex(out, tc.margin);
  out << ' ' << tc.anchors_per_update << ' ' << tc.grad_steps_per_round << ' '
      << tc.pairs_per_anchor << ' ';
  WriteHex(out, tc.learning_rate);
  out << ' ' << encoder.rounds() << "\n";
  WriteMlp(out, "encoder_net", encoder.params());

  out << "goal_set " << goal_set.size() << ' ' << goal_set.capacity();
  if (goal_set.size() > 0) out << ' ' << goal_set.states().front().size();
  out << "\n";
  for (const Vector& s : goal_set.states()) {
    std::vector<double> row(s.data(), s.data() + s.size());
    WriteValues(out, row);
  }
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

LoadedCheckpoint LoadCheckpoint(const std::string& dir) {
  std::string path = dir + "/" + kFileName;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  std::string version;
  std::getline(in, version);
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version '" + version + "'");
  }

  MlpParams mean_net = ReadMlp(in, "policy_mean");
  std::string tag;
  int log_std_dim = 0;
  in >> tag >> log_std_dim;
  if (tag != "log_std" || log_std_dim < 1) throw std::runtime_error("checkpoint: bad log_std");
  std::vector<double> ls = ReadValues(in, static_cast<std::size_t>(log_std_dim));
  Vector log_std = Vector::FromData(std::move(ls));
  MlpParams value_net = ReadMlp(in, "policy_value");

  in >> tag;
  if (tag != "encoder_config") throw std::runtime_error("checkpoint: bad encoder section");
  TdrpConfig tc;
  int rounds = 0;
  std::string margin_tok, lr_tok;
  in >> tc.step >> tc.embedding_dim >> margin_tok >> tc.anchors_per_update >>
      tc.grad_steps_per_round >> tc.pairs_per_anchor >> lr_tok >> rounds;
  tc.margin = std::strtod(margin_tok.c_str(), nullptr);
  tc.learning_rate = std::strtod(lr_tok.c_str(), nullptr);
  MlpParams encoder_net = ReadMlp(in, "encoder_net");
  tc.layer_sizes.clear();
  std::vector<int> enc_sizes = encoder_net.sizes();
  for (std::size_t i = 1; i + 1 < enc_sizes.size(); ++i) tc.layer_sizes.push_back(enc_sizes[i]);

  in >> tag;
  if (tag != "goal_set") throw std::runtime_error("checkpoint: bad goal_set section");
  int count = 0, capacity = 0;
  in >> count >> capacity;
  int dim = 0;
  if (count > 0) in >> dim;
  GoalSet goal_set(capacity);
  for (int i = 0; i < count; ++i) {
    std::vector<double> row = ReadValues(in, static_cast<std::size_t>(dim));
    goal_set.Update(Vector::FromData(std::move(row)), true);
  }

  return LoadedCheckpoint{Policy(std::move(mean_net), std::move(log_std), std::move(value_net)),
                          Encoder(std::move(tc), std::move(encoder_net), rounds),
                          std::move(goal_set)};
}

}  // namespace tdrp
