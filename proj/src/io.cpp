#include "qbc/io.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "qbc/errors.hpp"

namespace qbc {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string out = buf;
  // Integral output such as "-0" would parse back as an integer and lose the sign.
  if (out.find_first_of(".en") == std::string::npos) out += ".0";
  return out;
}

json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void require_fields(const json& j, std::string_view what, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional, bool reject_unknown) {
  if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
  std::set<std::string> allowed;
  for (const char* f : required) {
    if (!j.contains(f)) throw ParseError(std::string(what) + ": missing field \"" + f + "\"");
    allowed.insert(f);
  }
  for (const char* f : optional) allowed.insert(f);
  if (!reject_unknown) return;
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ParseError(std::string(what) + ": unknown field \"" + item.key() + "\"");
    }
  }
}

int get_int(const json& j, const char* field, std::string_view what) {
  const json& v = j.at(field);
  if (!v.is_number_integer()) throw ParseError(std::string(what) + ": \"" + field + "\" must be an integer");
  return v.get<int>();
}

std::vector<int> get_int_array(const json& v, std::string_view what, const char* field) {
  if (!v.is_array()) throw ParseError(std::string(what) + ": \"" + field + "\" must be an array");
  std::vector<int> out;
  for (const json& x : v) {
    if (!x.is_number_integer()) throw ParseError(std::string(what) + ": \"" + field + "\" must hold integers");
    out.push_back(x.get<int>());
  }
  return out;
}

StateVector statevector_from(const json& j, std::string_view what) {
  const int n = get_int(j, "n", what);
  if (n < 1 || n > kMaxQubits) throw ParseError(std::string(what) + ": n outside [1, 24]");
  const json& amps = j.at("amps");
  const auto dim = std::size_t{1} << n;
  if (!amps.is_array() || amps.size() != dim) {
    throw ParseError(std::string(what) + ": \"amps\" must hold 2^n = " + std::to_string(dim) +
                     " entries");
  }
  StateVector::Amplitudes values(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const json& a = amps[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw ParseError(std::string(what) + ": amplitude " + std::to_string(i) +
                       " must be [re, im]");
    }
    values[static_cast<Eigen::Index>(i)] = {a[0].get<double>(), a[1].get<double>()};
  }
  const double norm = values.squaredNorm();
  if (std::abs(norm - 1) > kNormTolerance) {
    throw IntegrityError(std::string(what) + ": amplitudes have norm " + format_double(norm));
  }
  return StateVector(n, std::move(values));
}

std::string amps_body(const StateVector& s) {
  std::string out = "\"n\":" + std::to_string(s.qubits()) + ",\"amps\":[";
  for (Eigen::Index i = 0; i < s.dimension(); ++i) {
    if (i) out += ',';
    out += '[' + format_double(s[i].real()) + ',' + format_double(s[i].imag()) + ']';
  }
  out += ']';
  return out;
}

CipherBlock cipherblock_from(const json& j, std::string_view what) {
  require_fields(j, what, {"n", "amps", "block_index", "mode"}, {}, true);
  const int index = get_int(j, "block_index", what);
  if (index < 0) throw ParseError(std::string(what) + ": negative block_index");
  if (!j.at("mode").is_string()) throw ParseError(std::string(what) + ": \"mode\" must be a string");
  return {statevector_from(j, what), static_cast<std::size_t>(index), j.at("mode").get<std::string>()};
}

ordered_json matrix_json(const DependenceMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 1; r <= m.size(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 1; c <= m.size(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string statevector_to_json(const StateVector& s) { return '{' + amps_body(s) + '}'; }

StateVector statevector_from_json(std::string_view text) {
  const json j = parse_json(text, "statevector");
  require_fields(j, "statevector", {"n", "amps"}, {}, true);
  return statevector_from(j, "statevector");
}

std::string cipherblock_to_json(const CipherBlock& block) {
  return '{' + amps_body(block.state) + ",\"block_index\":" + std::to_string(block.block_index) +
         ",\"mode\":" + json(block.mode).dump() + '}';
}

CipherBlock cipherblock_from_json(std::string_view text) {
  return cipherblock_from(parse_json(text, "cipher block"), "cipher block");
}

std::string transmission_to_json(const Transmission& t) {
  std::string out = "{\"mode\":\"" + std::string(mode_tag(t.mode)) + "\",\"n\":" +
                    std::to_string(t.block_size) + ",\"m\":" + std::to_string(t.blocks) +
                    ",\"iv_public\":false,\"payload\":[";
  for (std::size_t i = 0; i < t.payload.size(); ++i) {
    if (i) out += ',';
    out += cipherblock_to_json(t.payload[i]);
  }
  out += "]}";
  return out;
}

Transmission transmission_from_json(std::string_view text) {
  constexpr std::string_view what = "transmission";
  const json j = parse_json(text, what);
  require_fields(j, what, {"mode", "n", "m", "iv_public", "payload"}, {}, true);
  if (!j.at("mode").is_string()) throw ParseError("transmission: \"mode\" must be a string");
  Transmission t;
  try {
    t.mode = parse_mode(j.at("mode").get<std::string>());
  } catch (const InputError& e) {
    throw ParseError(std::string("transmission: ") + e.what());
  }
  t.block_size = get_int(j, "n", what);
  t.blocks = get_int(j, "m", what);
  if (t.block_size < 1 || t.blocks < 0) throw ParseError("transmission: invalid n or m");
  if (!j.at("payload").is_array()) throw ParseError("transmission: \"payload\" must be an array");
  for (const json& entry : j.at("payload")) t.payload.push_back(cipherblock_from(entry, what));
  return t;
}

std::string key_to_json(const CipherKey& key) {
  ordered_json j;
  j["version"] = key.version();
  j["n"] = key.qubits();
  j["N"] = key.grid();
  j["theta"] = key.theta_indices();
  ordered_json pairs = ordered_json::array();
  for (const StepPair& p : key.step3_pairs()) pairs.push_back({p.downstream, p.upstream});
  j["step3_pairs"] = std::move(pairs);
  j["step4_upstream_order"] = key.step4_upstream_order();
  if (key.mode2_pairing()) j["mode2_pairing"] = *key.mode2_pairing();
  if (key.iv()) j["iv"] = key.iv()->to_string();
  return j.dump(2) + "\n";
}

CipherKey key_from_json(std::string_view text) {
  constexpr std::string_view what = "key";
  const json j = parse_json(text, what);
  require_fields(j, what, {"version", "n", "N", "theta", "step3_pairs", "step4_upstream_order"},
                 {"mode2_pairing", "iv"}, true);
  if (get_int(j, "version", what) != CipherKey::kVersion) {
    throw ParseError("key: unsupported version " + j.at("version").dump());
  }
  std::vector<StepPair> pairs;
  const json& raw = j.at("step3_pairs");
  if (!raw.is_array()) throw ParseError("key: \"step3_pairs\" must be an array");
  for (const json& p : raw) {
    const std::vector<int> pair = get_int_array(p, what, "step3_pairs");
    if (pair.size() != 2) throw ParseError("key: step3 pair must be [down, up]");
    pairs.push_back({pair[0], pair[1]});
  }
  std::optional<std::vector<int>> pairing;
  if (j.contains("mode2_pairing")) pairing = get_int_array(j.at("mode2_pairing"), what, "mode2_pairing");
  std::optional<Bitstring> iv;
  if (j.contains("iv")) {
    if (!j.at("iv").is_string()) throw ParseError("key: \"iv\" must be a bitstring");
    try {
      iv = Bitstring::parse(j.at("iv").get<std::string>());
    } catch (const InputError& e) {
      throw ParseError(std::string("key: ") + e.what());
    }
  }
  return CipherKey(get_int(j, "n", what), get_int(j, "N", what),
                   get_int_array(j.at("theta"), what, "theta"), std::move(pairs),
                   get_int_array(j.at("step4_upstream_order"), what, "step4_upstream_order"),
                   std::move(pairing), iv);
}

ordered_json dependence_to_json(const DependenceMatrix& matrix, bool pass, double epsilon,
                                int grid) {
  ordered_json j;
  j["matrix"] = matrix_json(matrix);
  j["row_counts"] = matrix.row_counts();
  j["col_counts"] = matrix.col_counts();
  j["pass"] = pass;
  j["epsilon"] = epsilon;
  j["grid"] = grid;
  return j;
}

ordered_json confusion_to_json(const ConfusionReport& report) {
  ordered_json j;
  j["matrix"] = matrix_json(report.matrix);
  j["row_counts"] = report.row_counts;
  j["col_counts"] = report.col_counts;
  j["pass"] = report.pass;
  return j;
}

ordered_json diffusion_to_json(const DiffusionProfile& profile) {
  ordered_json j;
  j["matrix"] = matrix_json(profile.changed);
  j["row_counts"] = profile.changed.row_counts();
  j["col_counts"] = profile.counts;
  j["pass"] = profile.pass;
  j["epsilon"] = profile.epsilon;
  return j;
}

ordered_json theorem1_to_json(const Theorem1Report& r) {
  ordered_json j;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["locality_checks"] = r.locality_checks;
  j["locality_violations"] = r.locality_violations;
  j["transfer_checks"] = r.transfer_checks;
  j["transfer_violations"] = r.transfer_violations;
  j["retention_checks"] = r.retention_checks;
  j["retention_violations"] = r.retention_violations;
  j["shared_cancellations"] = r.shared_cancellations;
  j["counterexamples"] = r.counterexamples;
  j["pass"] = r.pass();
  j["epsilon"] = r.epsilon;
  j["grid"] = r.grid;
  return j;
}

ordered_json attack_to_json(const AttackReport& report) {
  ordered_json j;
  j["attack"] = report.attack;
  j["trials"] = report.trials;
  j["parameters"] = ordered_json::object();
  for (const auto& [k, v] : report.parameters) j["parameters"][k] = v;
  j["estimates"] = ordered_json::object();
  for (const auto& [k, e] : report.estimates) {
    j["estimates"][k] = {{"successes", e.successes},
                         {"trials", e.trials},
                         {"probability", e.probability},
                         {"ci95_half_width", e.half_width}};
  }
  j["values"] = ordered_json::object();
  for (const auto& [k, v] : report.values) j["values"][k] = v;
  j["exact"] = ordered_json::object();
  for (const auto& [k, v] : report.exact) j["exact"][k] = v;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace qbc
