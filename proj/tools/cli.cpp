#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <json.hpp>

#include "qcov/attacks.hpp"
#include "qcov/coverage.hpp"
#include "qcov/dataset.hpp"
#include "qcov/diversity.hpp"
#include "qcov/error.hpp"
#include "qcov/fuzz.hpp"
#include "qcov/qnn.hpp"

namespace qcov::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Bad flags, config files or missing inputs; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { Str, Int, Real, Bool };

struct OptSpec {
  std::string name;  // JSON key; the flag is --name with '_' -> '-'
  Kind kind;
  json fallback;     // null means unset
  std::string help;
};

std::string flag_of(const std::string& name) {
  std::string f = "--" + name;
  for (char& c : f)
    if (c == '_') c = '-';
  return f;
}

json parse_value(const OptSpec& option, const std::string& text) {
  auto fail = [&] { throw UsageError(flag_of(option.name) + ": invalid value '" + text + "'"); };
  switch (option.kind) {
    case Kind::Str:
      return text;
    case Kind::Bool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      fail();
      break;
    case Kind::Int: {
      long long v = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) fail();
      return v;
    }
    case Kind::Real: {
      double v = 0;
      const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) fail();
      return v;
    }
  }
  return nullptr;
}

void check_type(const OptSpec& option, const json& v) {
  if (v.is_null()) return;
  bool ok = false;
  switch (option.kind) {
    case Kind::Str: ok = v.is_string(); break;
    case Kind::Bool: ok = v.is_boolean(); break;
    case Kind::Int: ok = v.is_number_integer(); break;
    case Kind::Real: ok = v.is_number(); break;
  }
  if (!ok) throw UsageError("config key '" + option.name + "' has the wrong type");
}

/// One subcommand: its option table, the CLI11 bindings and the handler.
struct Command {
  using Handler =
      std::function<void(const json&, const fs::path&, std::ostream&, std::ostream&)>;

  Command(std::string n, std::string h, std::vector<OptSpec> o, Handler f)
      : name(std::move(n)), help(std::move(h)), opts(std::move(o)), handler(std::move(f)) {}

  std::string name;
  std::string help;
  std::vector<OptSpec> opts;
  Handler handler;

  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> bound;
  std::string config_path;

  void bind(CLI::App& parent) {
    app = parent.add_subcommand(name, help);
    app->add_option("--config", config_path, "JSON file with option values; flags override it")
        ->type_name("FILE");
    for (const auto& o : opts) {
      std::string h = o.help;
      if (!o.fallback.is_null()) h += " (default " + o.fallback.dump() + ")";
      if (o.kind == Kind::Bool) {
        bound[o.name] = app->add_flag(flag_of(o.name))->description(h);
      } else {
        static const char* kTypeNames[] = {"TEXT", "INT", "FLOAT", ""};
        bound[o.name] = app->add_option(flag_of(o.name), raw[o.name], h)
                            ->type_name(kTypeNames[static_cast<int>(o.kind)]);
      }
    }
  }

  json resolve() const {
    json cfg = json::object();
    for (const auto& o : opts) cfg[o.name] = o.fallback;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file " + config_path);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError(config_path + ": " + e.what());
      }
      if (!file.is_object()) throw UsageError(config_path + ": expected a JSON object");
      for (const auto& [key, value] : file.items()) {
        if (key == "command") {
          if (value != name) throw UsageError(config_path + ": config is for '" +
                                              value.dump() + "', not '" + name + "'");
          continue;
        }
        const auto it = std::find_if(opts.begin(), opts.end(),
                                     [&](const OptSpec& o) { return o.name == key; });
        if (it == opts.end()) throw UsageError(config_path + ": unknown key '" + key + "'");
        check_type(*it, value);
        cfg[key] = value;
      }
    }
    for (const auto& o : opts) {
      const CLI::Option* opt = bound.at(o.name);
      if (opt->count() == 0) continue;
      cfg[o.name] = o.kind == Kind::Bool ? json(true) : parse_value(o, raw.at(o.name));
    }
    json out{{"command", name}};
    for (const auto& [k, v] : cfg.items()) out[k] = v;
    return out;
  }
};

// ---- config accessors ----

bool has(const json& c, const std::string& k) { return c.contains(k) && !c.at(k).is_null(); }

const json& need(const json& c, const std::string& k) {
  if (!has(c, k)) throw UsageError("missing required option " + flag_of(k));
  return c.at(k);
}

std::string str(const json& c, const std::string& k) { return need(c, k).get<std::string>(); }
double real(const json& c, const std::string& k) { return need(c, k).get<double>(); }
bool flag(const json& c, const std::string& k) { return has(c, k) && c.at(k).get<bool>(); }

long long integer(const json& c, const std::string& k) { return need(c, k).get<long long>(); }

std::uint64_t count(const json& c, const std::string& k) {
  const long long v = integer(c, k);
  if (v < 0) throw UsageError(flag_of(k) + " must be >= 0");
  return static_cast<std::uint64_t>(v);
}

unsigned threads_of(const json& c) {
  const auto t = count(c, "threads");
  if (t == 0) throw UsageError("--threads must be >= 1");
  return static_cast<unsigned>(t);
}

std::optional<std::uint64_t> shots_of(const json& c) {
  const auto s = count(c, "shots");
  if (s == 0) return std::nullopt;
  return s;
}

// ---- inputs and outputs ----

LabeledDataset load_data(const std::string& source) {
  if (auto b = builtin_dataset(source)) return *b;
  if (!fs::exists(source)) throw UsageError("dataset not found: " + source);
  return read_dataset_csv(source);
}

QnnModel load_model_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("model not found: " + path);
  return load_model(path);
}

StateProfile load_profile_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("profile not found: " + path);
  return load_profile(path);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json report_json(const CoverageReport& r) { return json::parse(report_to_json(r)); }

CoverageConfig coverage_config(const json& c) {
  CoverageConfig cov;
  cov.k_cells = count(c, "k_cells");
  cov.top_k = count(c, "top_k");
  cov.boundary_mode = boundary_mode_from_string(str(c, "boundary"));
  cov.validate();
  return cov;
}

int default_qubits(EncoderKind kind, std::size_t dim, int num_classes) {
  int q = 1;
  if (kind == EncoderKind::Angle) {
    q = static_cast<int>(dim);
  } else {
    while ((std::size_t{1} << q) < dim) ++q;
  }
  return std::max(q, num_classes);
}

// ---- option tables ----

const OptSpec kOut{"out", Kind::Str, "qcov-out", "output directory"};
const OptSpec kThreads{"threads", Kind::Int, 1, "worker threads for per-input evaluation"};
const OptSpec kSeed{"seed", Kind::Int, 0, "random seed"};
const OptSpec kData{"data", Kind::Str, nullptr, "dataset CSV or builtin:NAME"};
const OptSpec kModel{"model", Kind::Str, nullptr, "model JSON"};
const OptSpec kProfile{"profile", Kind::Str, nullptr, "profile JSON"};
const OptSpec kShots{"shots", Kind::Int, 0, "measurement shots per input; 0 = exact"};
const OptSpec kPerClass{"per_class", Kind::Int, 0, "rows sampled per class; 0 = all"};

std::vector<OptSpec> coverage_opts() {
  return {{"k_cells", Kind::Int, 100, "cells per state for KSC"},
          {"top_k", Kind::Int, 1, "states per input for TSC"},
          {"boundary", Kind::Str, "raw", "raw | sigma | mad"}};
}

template <typename... Lists>
std::vector<OptSpec> concat(std::vector<OptSpec> first, Lists... rest) {
  (first.insert(first.end(), rest.begin(), rest.end()), ...);
  return first;
}

// ---- commands ----

void cmd_train(const json& c, const fs::path& out, std::ostream& os, std::ostream&) {
  const auto data = load_data(str(c, "data"));
  const EncoderSpec enc{encoder_kind_from_string(str(c, "encoder")), data.num_features()};
  const AnsatzSpec ansatz{ansatz_preset_from_string(str(c, "preset")),
                          static_cast<int>(integer(c, "layers")),
                          entanglement_from_string(str(c, "entanglement"))};
  const int classes = data.num_classes();
  const int q = has(c, "qubits") ? static_cast<int>(integer(c, "qubits"))
                                 : default_qubits(enc.kind, enc.input_dim, classes);
  const auto init = make_model(enc, ansatz, q, classes, count(c, "seed"));

  TrainConfig tc;
  tc.epochs = static_cast<int>(integer(c, "epochs"));
  tc.learning_rate = real(c, "learning_rate");
  tc.batch_size = count(c, "batch_size");
  const auto opt = str(c, "optimizer");
  if (opt == "adam") tc.optimizer = Optimizer::Adam;
  else if (opt == "sgd") tc.optimizer = Optimizer::SGD;
  else throw UsageError("--optimizer must be adam or sgd");
  tc.seed = count(c, "seed");
  tc.loss.temperature = real(c, "temperature");
  tc.threads = threads_of(c);
  const auto result = train(init, data, tc);

  save_model(result.model, out / "model.json");
  std::string hist = "epoch,loss\n0," + json(result.initial_loss).dump() + "\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e)
    hist += std::to_string(e + 1) + "," + json(result.loss_history[e]).dump() + "\n";
  write_text(out / "loss_history.csv", hist);

  json summary{{"train_accuracy", result.train_accuracy},
               {"initial_loss", result.initial_loss},
               {"final_loss", result.loss_history.empty() ? result.initial_loss
                                                          : result.loss_history.back()},
               {"num_qubits", q},
               {"num_params", result.model.params.size()},
               {"dataset_digest", data.digest()},
               {"num_rows", data.size()}};
  if (has(c, "validation")) {
    const auto val = load_data(str(c, "validation"));
    summary["validation_accuracy"] = accuracy(result.model, val);
  }
  write_json(out / "summary.json", summary);
  os << "train accuracy " << result.train_accuracy << "\n";
}

void cmd_profile(const json& c, const fs::path& out, std::ostream& os, std::ostream& es) {
  const auto model = load_model_file(str(c, "model"));
  const auto data = load_data(str(c, "data"));
  if (!model.training_digest.empty() && model.training_digest != data.digest()) {
    es << "warning: profiling data (digest " << data.digest()
       << ") differs from the model's training data (digest " << model.training_digest
       << ")\n";
  }
  const auto per_class = count(c, "per_class");
  const auto seed = count(c, "seed");
  const auto sample = per_class == 0 ? data : data.sample_per_class(per_class, seed);
  const auto shots = shots_of(c);
  const auto vecs = collect_probabilities(model, sample, shots, seed, threads_of(c));
  auto p = profile_from_vectors(vecs, sample.digest());
  if (flag(c, "mad")) p = mad_refine(p, per_state_samples(vecs), real(c, "mad_confidence"));
  save_profile(p, out / "profile.json");
  os << "profiled " << sample.size() << " rows over " << p.num_states << " states\n";
}

void cmd_coverage(const json& c, const fs::path& out, std::ostream& os, std::ostream&) {
  const auto prof = load_profile_file(str(c, "profile"));
  const auto cov = coverage_config(c);
  CoverageReport r;
  if (has(c, "probs")) {
    if (has(c, "data")) throw UsageError("--probs and --data are mutually exclusive");
    const auto path = str(c, "probs");
    if (!fs::exists(path)) throw UsageError("probability file not found: " + path);
    r = coverage_of_vectors(read_prob_vectors_csv(path), prof, cov);
  } else {
    const auto model = load_model_file(str(c, "model"));
    const auto data = load_data(str(c, "data"));
    r = coverage_suite(model, data, prof, cov, shots_of(c), count(c, "seed"), threads_of(c));
  }
  write_text(out / "coverage.json", report_to_json(r));
  write_text(out / "coverage.csv", report_to_csv(r));
  os << "KSC " << r.ksc << " SCC " << r.scc << " TSC " << r.tsc << "\n";
}

void cmd_attack(const json& c, const fs::path& out, std::ostream& os, std::ostream&) {
  const auto model = load_model_file(str(c, "model"));
  const auto data = load_data(str(c, "data"));
  AttackConfig ac;
  ac.kind = attack_kind_from_string(str(c, "kind"));
  ac.epsilon = real(c, "epsilon");
  ac.theta = real(c, "theta");
  ac.gamma = real(c, "gamma");
  ac.seed = count(c, "seed");
  ac.validate();
  const auto suite = attack_dataset(model, data, ac, threads_of(c));
  write_dataset_csv(suite.adversarial, out / "adversarial.csv");

  json rows = json::array();
  std::size_t successes = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto a = data.row(i);
    const auto b = suite.adversarial.row(i);
    std::size_t changed = 0;
    for (std::size_t k = 0; k < a.size(); ++k) changed += a[k] != b[k];
    successes += suite.success[i];
    rows.push_back({{"row", i}, {"success", static_cast<bool>(suite.success[i])},
                    {"features_changed", changed}});
  }
  write_json(out / "provenance.json",
             {{"source_digest", data.digest()},
              {"adversarial_digest", suite.adversarial.digest()},
              {"model_training_digest", model.training_digest},
              {"rows", rows}});

  json summary{{"kind", to_string(ac.kind)},
               {"num_rows", data.size()},
               {"num_success", successes},
               {"success_rate", suite.success_rate}};
  if (has(c, "profile")) {
    const auto prof = load_profile_file(str(c, "profile"));
    const auto cov = coverage_config(c);
    const auto t = threads_of(c);
    summary["coverage_original"] = report_json(coverage_suite(model, data, prof, cov, {}, 0, t));
    summary["coverage_combined"] = report_json(
        coverage_suite(model, data.merged(suite.adversarial), prof, cov, {}, 0, t));
  }
  write_json(out / "summary.json", summary);
  os << "attack success rate " << suite.success_rate << "\n";
}

void cmd_fuzz(const json& c, const fs::path& out, std::ostream& os, std::ostream&) {
  const auto model = load_model_file(str(c, "model"));
  const auto data = load_data(str(c, "data"));
  const auto per_class = count(c, "per_class");
  const auto seeds = per_class == 0 ? data : data.sample_per_class(per_class, count(c, "seed"));

  FuzzConfig fc;
  fc.criterion = criterion_from_string(str(c, "criterion"));
  fc.max_iterations = count(c, "max_iterations");
  fc.alpha = real(c, "alpha");
  fc.seed = count(c, "seed");
  fc.reenqueue_probability = real(c, "reenqueue_probability");
  fc.coverage = coverage_config(c);
  fc.mutation.noise = real(c, "noise");
  fc.mutation.brightness = real(c, "brightness");
  fc.mutation.contrast_low = real(c, "contrast_low");
  fc.mutation.contrast_high = real(c, "contrast_high");
  fc.validate();

  const auto mode = str(c, "mode");
  std::optional<StateProfile> prof;
  if (has(c, "profile")) prof = load_profile_file(str(c, "profile"));
  FuzzOutcome r;
  if (mode == "guided") {
    if (!prof) throw UsageError("guided fuzzing needs --profile");
    r = fuzz(model, seeds, *prof, fc);
  } else if (mode == "random") {
    r = random_test(model, seeds, fc, prof ? &*prof : nullptr);
  } else {
    throw UsageError("--mode must be guided or random");
  }

  write_dataset_csv(r.failed_cases, out / "failed.csv");
  write_dataset_csv(r.retained, out / "retained.csv");
  json summary{{"mode", mode},
               {"criterion", to_string(fc.criterion)},
               {"tsr", r.tsr},
               {"iterations", r.iterations},
               {"num_initial_seeds", r.initial_seeds.size()},
               {"num_failed", r.failed_cases.size()},
               {"num_retained", r.retained.size()},
               {"failed_ancestors", r.failed_ancestors}};
  if (r.coverage_before) summary["coverage_before"] = report_json(*r.coverage_before);
  if (r.coverage_after) summary["coverage_after"] = report_json(*r.coverage_after);
  write_json(out / "summary.json", summary);
  write_json(out / "manifest.json",
             {{"config", c},
              {"inputs", {{"seeds_digest", seeds.digest()},
                          {"model_training_digest", model.training_digest},
                          {"profile_digest", prof ? prof->digest : ""}}},
              {"outputs", {{"failed_digest", r.failed_cases.digest()},
                           {"retained_digest", r.retained.digest()},
                           {"tsr", r.tsr}}}});
  os << "TSR " << r.tsr << " after " << r.iterations << " iterations\n";
}

void cmd_diversity(const json& c, const fs::path& out, std::ostream& os, std::ostream&) {
  const auto data = load_data(str(c, "data"));
  const auto per_class = count(c, "per_class");
  const auto suite = per_class == 0 ? data : data.sample_per_class(per_class, count(c, "seed"));
  DiversityConfig dc;
  dc.num_haar_samples = count(c, "num_haar");
  dc.max_pairs = count(c, "max_pairs");
  dc.seed = count(c, "seed");

  const auto states_kind = str(c, "states");
  DiversityReport r;
  if (has(c, "model")) {
    const auto model = load_model_file(str(c, "model"));
    std::vector<Statevector> states;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      if (states_kind == "input") states.push_back(encode(model.encoder, suite.row(i), model.num_qubits));
      else if (states_kind == "output") states.push_back(output_state(model, suite.row(i)));
      else throw UsageError("--states must be input or output");
    }
    r = state_diversity(states, dc);
  } else {
    if (states_kind != "input") throw UsageError("--states output needs --model");
    const EncoderSpec enc{encoder_kind_from_string(str(c, "encoder")), suite.num_features()};
    const int q = has(c, "qubits") ? static_cast<int>(integer(c, "qubits"))
                                   : default_qubits(enc.kind, enc.input_dim, 1);
    r = suite_diversity(enc, q, suite, dc);
  }
  write_text(out / "diversity.json", diversity_to_json(r));
  write_text(out / "suite_histogram.csv", histogram_to_csv(r.suite_hist));
  write_text(out / "haar_histogram.csv", histogram_to_csv(r.haar_hist));
  os << "JS vs Haar " << r.js_vs_haar << "\n";
}

std::vector<Command> make_commands() {
  std::vector<Command> cmds;
  cmds.push_back(Command("train", "Train a classifier",
                  {kData, kOut, kThreads, kSeed,
                   {"encoder", Kind::Str, "angle", "angle | amplitude"},
                   {"preset", Kind::Str, "layered_rot", "layered_rot | strongly_entangling"},
                   {"layers", Kind::Int, 2, "ansatz layers"},
                   {"entanglement", Kind::Str, "linear", "linear | cyclic | star | full"},
                   {"qubits", Kind::Int, nullptr, "qubit count (default from encoder)"},
                   {"epochs", Kind::Int, 30, "training epochs"},
                   {"learning_rate", Kind::Real, 0.05, "optimizer step size"},
                   {"batch_size", Kind::Int, 16, "minibatch size"},
                   {"optimizer", Kind::Str, "adam", "adam | sgd"},
                   {"temperature", Kind::Real, 1.0, "softmax temperature"},
                   {"validation", Kind::Str, nullptr, "held-out dataset for accuracy"}},
                  cmd_train));
  cmds.push_back(Command("profile", "Record per-state probability bounds",
                  {kModel, kData, kOut, kThreads, kSeed, kShots,
                   {"per_class", Kind::Int, 100, "rows sampled per class; 0 = all"},
                   {"mad", Kind::Bool, false, "add MAD-refined bounds"},
                   {"mad_confidence", Kind::Real, 0.99, "MAD filter confidence"}},
                  cmd_profile));
  cmds.push_back(Command("coverage", "Compute KSC, SCC and TSC of a suite",
                  concat({kProfile, kModel, kData, kOut, kThreads, kSeed, kShots,
                          {"probs", Kind::Str, nullptr, "CSV of probability vectors"}},
                         coverage_opts()),
                  cmd_coverage));
  cmds.push_back(Command("attack", "Generate adversarial inputs",
                  concat({kModel, kData, kOut, kThreads, kSeed,
                          {"kind", Kind::Str, "fgsm", "random | fgsm | jsma"},
                          {"epsilon", Kind::Real, 64.0 / 255.0, "L-infinity budget"},
                          {"theta", Kind::Real, 1.0, "JSMA step"},
                          {"gamma", Kind::Real, 0.1, "JSMA feature fraction"},
                          {"profile", Kind::Str, nullptr, "report coverage before and after"}},
                         coverage_opts()),
                  cmd_attack));
  cmds.push_back(Command("fuzz", "Coverage-guided or random fuzzing",
                  concat({kModel, kData, kProfile, kOut, kThreads, kSeed, kPerClass,
                          {"mode", Kind::Str, "guided", "guided | random"},
                          {"criterion", Kind::Str, "ksc", "ksc | scc | tsc"},
                          {"max_iterations", Kind::Int, 2000, "mutation budget"},
                          {"alpha", Kind::Real, 0.2, "L-infinity budget around each seed"},
                          {"reenqueue_probability", Kind::Real, 1.0,
                           "random mode: chance a mutant is re-enqueued"},
                          {"noise", Kind::Real, 0.05, "noise mutation amplitude"},
                          {"brightness", Kind::Real, 0.1, "brightness shift bound"},
                          {"contrast_low", Kind::Real, 0.8, "lowest contrast factor"},
                          {"contrast_high", Kind::Real, 1.2, "highest contrast factor"}},
                         coverage_opts()),
                  cmd_fuzz));
  cmds.push_back(Command("diversity", "Fidelity diversity against Haar-random states",
                  {kData, kModel, kOut, kSeed, kPerClass,
                   {"states", Kind::Str, "input", "input | output (output needs --model)"},
                   {"encoder", Kind::Str, "angle", "encoder when no model is given"},
                   {"qubits", Kind::Int, nullptr, "qubits when no model is given"},
                   {"num_haar", Kind::Int, 1000, "Haar-random reference states"},
                   {"max_pairs", Kind::Int, 100000, "pair subsample cap"}},
                  cmd_diversity));
  return cmds;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage and testing toolkit for quantum neural network classifiers", "qcov"};
  app.require_subcommand(1);
  auto cmds = make_commands();
  for (auto& c : cmds) c.bind(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto& c : cmds) {
    if (!c.app->parsed()) continue;
    try {
      const json cfg = c.resolve();
      const fs::path dir = str(cfg, "out");
      fs::create_directories(dir);
      write_json(dir / "resolved_config.json", cfg);
      c.handler(cfg, dir, out, err);
      return 0;
    } catch (const UsageError& e) {
      err << "qcov " << c.name << ": " << e.what() << "\n";
      return 2;
    } catch (const ConfigError& e) {
      err << "qcov " << c.name << ": " << e.what() << "\n";
      return 2;
    } catch (const ParseError& e) {
      err << "qcov " << c.name << ": " << e.what() << "\n";
      return 2;
    } catch (const DimensionError& e) {
      err << "qcov " << c.name << ": " << e.what() << "\n";
      return 2;
    } catch (const json::exception& e) {
      err << "qcov " << c.name << ": bad option value: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err << "qcov " << c.name << ": error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

}  // namespace qcov::cli
