// JSON and CSV persistence for models, profiles and reports.

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qcov/coverage.hpp"
#include "qcov/diversity.hpp"
#include "qcov/error.hpp"
#include "qcov/qnn.hpp"

namespace qcov {

using nlohmann::json;

namespace {

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
  return *it;
}

template <typename T>
T as(const json& value, const std::string& path) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ParseError(path + ": wrong type");
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& path) {
  return as<T>(field(obj, key, path), path + "." + key);
}

std::vector<double> get_reals(const json& obj, const std::string& key,
                              const std::string& path) {
  const json& arr = field(obj, key, path);
  if (!arr.is_array()) throw ParseError(path + "." + key + ": expected an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "." + key + "[" + std::to_string(i) + "]";
    if (!arr[i].is_number()) throw ParseError(p + ": expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

template <typename Fn>
auto enum_field(const json& obj, const std::string& key, const std::string& path,
                Fn convert) {
  const auto text = get<std::string>(obj, key, path);
  try {
    return convert(text);
  } catch (const ConfigError& e) {
    throw ParseError(path + "." + key + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

void check_version(const json& j, const std::string& path) {
  const int version = get<int>(j, "format_version", path);
  if (version != kModelFormatVersion) {
    throw ParseError(path + ".format_version: unsupported version " +
                     std::to_string(version));
  }
}

}  // namespace

std::string model_to_json(const QnnModel& model) {
  json gates = json::array();
  for (const auto& g : model.circuit.gates) {
    json jg{{"kind", std::string(to_string(g.kind))}, {"target", g.target}};
    if (g.control) jg["control"] = *g.control;
    if (g.param_slot) jg["param"] = *g.param_slot;
    gates.push_back(std::move(jg));
  }
  json j{
      {"format_version", kModelFormatVersion},
      {"num_qubits", model.num_qubits},
      {"num_classes", model.num_classes},
      {"encoder", {{"kind", to_string(model.encoder.kind)},
                   {"input_dim", model.encoder.input_dim}}},
      {"ansatz", {{"preset", to_string(model.ansatz.preset)},
                  {"num_layers", model.ansatz.num_layers},
                  {"entanglement", to_string(model.ansatz.entanglement)}}},
      {"readout_qubits", model.readout_qubits},
      {"params", model.params},
      {"circuit", {{"num_params", model.circuit.num_params}, {"gates", gates}}},
      {"training_digest", model.training_digest},
  };
  return j.dump(2) + "\n";
}

QnnModel model_from_json(const std::string& text) {
  const json j = parse_text(text, "model");
  const std::string root = "model";
  check_version(j, root);

  QnnModel m;
  m.num_qubits = get<int>(j, "num_qubits", root);
  m.num_classes = get<int>(j, "num_classes", root);

  const json& enc = field(j, "encoder", root);
  m.encoder.kind = enum_field(enc, "kind", root + ".encoder", encoder_kind_from_string);
  m.encoder.input_dim = get<std::size_t>(enc, "input_dim", root + ".encoder");

  const json& ans = field(j, "ansatz", root);
  m.ansatz.preset = enum_field(ans, "preset", root + ".ansatz", ansatz_preset_from_string);
  m.ansatz.num_layers = get<int>(ans, "num_layers", root + ".ansatz");
  m.ansatz.entanglement =
      enum_field(ans, "entanglement", root + ".ansatz", entanglement_from_string);

  m.readout_qubits = get<std::vector<int>>(j, "readout_qubits", root);
  m.params = get_reals(j, "params", root);

  const json& circ = field(j, "circuit", root);
  m.circuit.num_qubits = m.num_qubits;
  m.circuit.num_params = get<std::size_t>(circ, "num_params", root + ".circuit");
  const json& gates = field(circ, "gates", root + ".circuit");
  if (!gates.is_array()) throw ParseError(root + ".circuit.gates: expected an array");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string p = root + ".circuit.gates[" + std::to_string(i) + "]";
    GateOp g;
    const auto kind = get<std::string>(gates[i], "kind", p);
    try {
      g.kind = gate_kind_from_string(kind);
    } catch (const Error& e) {
      throw ParseError(p + ".kind: " + e.what());
    }
    g.target = get<int>(gates[i], "target", p);
    if (gates[i].contains("control")) g.control = get<int>(gates[i], "control", p);
    if (gates[i].contains("param")) g.param_slot = get<std::size_t>(gates[i], "param", p);
    m.circuit.gates.push_back(g);
  }
  if (j.contains("training_digest")) {
    m.training_digest = get<std::string>(j, "training_digest", root);
  }

  try {
    m.validate();
  } catch (const Error& e) {
    throw ParseError(root + ": " + e.what());
  }
  return m;
}

void save_model(const QnnModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_json(model));
}

QnnModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string profile_to_json(const StateProfile& profile) {
  json j{
      {"format_version", kModelFormatVersion},
      {"num_states", profile.num_states},
      {"num_samples", profile.num_samples},
      {"digest", profile.digest},
      {"lower", profile.lower},
      {"upper", profile.upper},
      {"sigma", profile.sigma},
  };
  if (profile.has_mad()) {
    j["mad_lower"] = *profile.mad_lower;
    j["mad_upper"] = *profile.mad_upper;
  }
  return j.dump(2) + "\n";
}

StateProfile profile_from_json(const std::string& text) {
  const json j = parse_text(text, "profile");
  const std::string root = "profile";
  check_version(j, root);
  StateProfile p;
  p.lower = get_reals(j, "lower", root);
  p.upper = get_reals(j, "upper", root);
  p.num_states = j.contains("num_states") ? get<std::size_t>(j, "num_states", root)
                                          : p.lower.size();
  p.sigma = j.contains("sigma") ? get_reals(j, "sigma", root)
                                : std::vector<double>(p.lower.size(), 0.0);
  if (j.contains("num_samples")) p.num_samples = get<std::size_t>(j, "num_samples", root);
  if (j.contains("digest")) p.digest = get<std::string>(j, "digest", root);
  if (j.contains("mad_lower") || j.contains("mad_upper")) {
    p.mad_lower = get_reals(j, "mad_lower", root);
    p.mad_upper = get_reals(j, "mad_upper", root);
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw ParseError(root + ": " + e.what());
  }
  return p;
}

StateProfile load_profile(const std::filesystem::path& path) {
  try {
    return profile_from_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_profile(const StateProfile& profile, const std::filesystem::path& path) {
  write_file(path, profile_to_json(profile));
}

std::vector<ProbVector> prob_vectors_from_csv(const std::string& text,
                                              const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty file");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] != "p" + std::to_string(j)) {
      throw ParseError(source + ":1: header must be p0,...,p{n-1}");
    }
  }
  std::vector<ProbVector> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (cells.size() != header.size()) {
      throw ParseError(where + ": expected " + std::to_string(header.size()) + " columns");
    }
    ProbVector pv;
    for (const auto& c : cells) {
      double v = 0.0;
      const char* end = c.data() + c.size();
      const auto r = std::from_chars(c.data(), end, v);
      if (r.ec != std::errc() || r.ptr != end) {
        throw ParseError(where + ": not a number: '" + c + "'");
      }
      if (!(v >= 0.0 && v <= 1.0)) throw ParseError(where + ": probability outside [0, 1]");
      pv.probs.push_back(v);
    }
    out.push_back(std::move(pv));
  }
  return out;
}

std::vector<ProbVector> read_prob_vectors_csv(const std::filesystem::path& path) {
  return prob_vectors_from_csv(read_file(path), path.string());
}

std::string report_to_json(const CoverageReport& r) {
  json j{
      {"ksc", r.ksc},
      {"scc", r.scc},
      {"tsc", r.tsc},
      {"covered_cells", r.covered_cells},
      {"covered_corners", r.covered_corners},
      {"covered_top_states", r.covered_top_states},
      {"num_states", r.num_states},
      {"k_cells", r.k_cells},
      {"num_inputs", r.num_inputs},
  };
  return j.dump(2) + "\n";
}

std::string report_to_csv(const CoverageReport& r) {
  std::string out = "criterion,percent,covered,total\n";
  out += "ksc," + fmt(r.ksc) + "," + std::to_string(r.covered_cells) + "," +
         std::to_string(r.k_cells * r.num_states) + "\n";
  out += "scc," + fmt(r.scc) + "," + std::to_string(r.covered_corners) + "," +
         std::to_string(2 * r.num_states) + "\n";
  out += "tsc," + fmt(r.tsc) + "," + std::to_string(r.covered_top_states) + "," +
         std::to_string(r.num_states) + "\n";
  return out;
}

std::string histogram_to_csv(const FidelityHistogram& hist) {
  std::string out = "bin_left,bin_right,density\n";
  for (std::size_t i = 0; i < hist.densities.size(); ++i) {
    out += fmt(hist.bin_edges[i]) + "," + fmt(hist.bin_edges[i + 1]) + "," +
           fmt(hist.densities[i]) + "\n";
  }
  return out;
}

std::string diversity_to_json(const DiversityReport& report) {
  json j{
      {"js_vs_haar", report.js_vs_haar},
      {"mean_fidelity", report.mean_fidelity},
      {"closest_neighbor_fidelity", report.closest_neighbor_fidelity},
      {"suite_pairs", report.suite_hist.sample_count},
      {"haar_pairs", report.haar_hist.sample_count},
      {"suite_densities", report.suite_hist.densities},
      {"haar_densities", report.haar_hist.densities},
  };
  return j.dump(2) + "\n";
}

}  // namespace qcov
