#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qbc/adversary.hpp"
#include "qbc/analysis.hpp"
#include "qbc/errors.hpp"
#include "qbc/io.hpp"
#include "qbc/modes.hpp"

namespace {

using namespace qbc;
using nlohmann::ordered_json;

enum Exit { kOk = 0, kUsage = 1, kIntegrity = 2, kResource = 3, kNotPass = 4 };

constexpr int kDefaultQubits = 8;
constexpr int kDefaultGrid = 256;
constexpr std::uint64_t kDefaultSeed = 42;

struct Options {
  std::uint64_t seed = kDefaultSeed;
  bool json = false;

  int n = kDefaultQubits;
  int grid = kDefaultGrid;
  std::string key_path;
  std::string in_path;
  std::string out_path;
  std::string mode = "m1";

  std::string kind;
  std::string ablate = "full";
  double epsilon = 1e-6;
  int probe_grid = 8;
  int trials = 1000;
  std::string plaintext;

  int repetitions = 5;
  std::string eve = "on";
  int samples = 10000;
  long length = 10;
};

Ablation parse_ablation(const std::string& s) {
  if (s == "step1-only") return Ablation::Step1Only;
  if (s == "through-step2") return Ablation::ThroughStep2;
  if (s == "through-step3") return Ablation::ThroughStep3;
  if (s == "full") return Ablation::Full;
  throw InputError("unknown ablation '" + s + "'");
}

void check_distinct(const std::string& in, const std::string& out) {
  if (!in.empty() && !out.empty() && std::filesystem::absolute(in) == std::filesystem::absolute(out)) {
    throw InputError("input and output paths must differ");
  }
}

CipherKey load_key(const Options& o) {
  if (o.key_path.empty()) {
    Rng rng(kDefaultSeed);
    return generate_key(kDefaultQubits, kDefaultGrid, rng);
  }
  return key_from_json(read_file(o.key_path));
}

PlainBlock plaintext_for(const Options& o, const CipherKey& key) {
  if (o.plaintext.empty()) return {Bitstring::zeros(key.qubits())};
  Bitstring bits = Bitstring::parse(o.plaintext);
  if (bits.size() != key.qubits()) throw InputError("--plaintext must have n bits");
  return {bits};
}

std::vector<PlainBlock> unpack_bytes(const std::string& bytes, int n) {
  const std::size_t bits = bytes.size() * 8;
  if (bits % static_cast<std::size_t>(n) != 0) {
    const std::size_t short_by = n - bits % static_cast<std::size_t>(n);
    std::ostringstream msg;
    msg << "input is " << bits << " bits, not a multiple of n=" << n << "; pad with " << short_by
        << " more bits (no implicit padding)";
    throw InputError(msg.str());
  }
  std::vector<PlainBlock> blocks;
  std::string current;
  for (unsigned char byte : bytes) {
    for (int b = 7; b >= 0; --b) {
      current += ((byte >> b) & 1) ? '1' : '0';
      if (static_cast<int>(current.size()) == n) {
        blocks.push_back({Bitstring::parse(current)});
        current.clear();
      }
    }
  }
  return blocks;
}

std::string pack_bytes(const std::vector<PlainBlock>& blocks) {
  std::string bits;
  for (const PlainBlock& b : blocks) bits += b.bits.to_string();
  if (bits.size() % 8 != 0) throw InputError("decrypted bit count is not a whole number of bytes");
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t j = 0; j < 8; ++j) byte = static_cast<unsigned char>((byte << 1) | (bits[i + j] == '1'));
    out += static_cast<char>(byte);
  }
  return out;
}

void emit(const Options& o, const ordered_json& report, const std::string& summary) {
  if (!o.out_path.empty()) write_file(o.out_path, report.dump(2) + "\n");
  if (o.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << summary;
  }
}

int cmd_keygen(const Options& o) {
  if (o.out_path.empty()) throw InputError("keygen needs --out");
  Rng rng(o.seed);
  CipherKey key = generate_key(o.n, o.grid, rng);
  key = key.with_iv(Bitstring(o.n, static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{1} << o.n))));
  write_file(o.out_path, key_to_json(key));
  const KeyspaceSize size = keyspace_size(o.n, o.grid);
  if (o.json) {
    ordered_json j;
    j["key"] = o.out_path;
    j["keyspace"] = size.count.str();
    j["log2_keyspace"] = size.log2;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "wrote " << o.out_path << "\nkeyspace " << size.count.str() << " (log2 "
              << std::fixed << std::setprecision(2) << size.log2 << ")\n";
  }
  return kOk;
}

int cmd_keyspace(const Options& o) {
  const KeyspaceSize size = keyspace_size(o.n, o.grid);
  ordered_json j;
  j["n"] = o.n;
  j["N"] = o.grid;
  j["keyspace"] = size.count.str();
  j["log2_keyspace"] = size.log2;
  emit(o, j, "keyspace " + size.count.str() + " (log2 " + std::to_string(size.log2) + ")\n");
  return kOk;
}

int cmd_encrypt(const Options& o) {
  if (o.in_path.empty() || o.out_path.empty()) throw InputError("encrypt needs --in and --out");
  check_distinct(o.in_path, o.out_path);
  const CipherKey key = key_from_json(read_file(o.key_path));
  const Mode mode = parse_mode(o.mode);
  const auto blocks = unpack_bytes(read_file(o.in_path), key.qubits());
  const ModeConfig cfg = mode_config(key, mode);
  Rng rng(o.seed);
  const Transmission t =
      mode == Mode::Measured ? mode1_encrypt(key, blocks, cfg, rng) : mode2_encrypt(key, blocks, cfg);
  write_file(o.out_path, transmission_to_json(t));
  if (!o.json) std::cout << "encrypted " << blocks.size() << " blocks in mode " << o.mode << "\n";
  return kOk;
}

// Reports which states of a failed transmission are impure.
void block_diagnostics(const CipherKey& key, const Transmission& t) {
  if (t.mode == Mode::Entangling) return;
  for (const CipherBlock& b : t.payload) {
    const bool carrier = b.mode == "m1-iv";
    try {
      if (carrier) {
        read_basis_state(b.state);
      } else {
        decrypt_block(key, b);
      }
      std::cerr << "  " << (carrier ? "iv carrier " : "block ") << b.block_index << ": ok\n";
    } catch (const Error& e) {
      std::cerr << "  " << (carrier ? "iv carrier " : "block ") << b.block_index << ": " << e.what()
                << "\n";
    }
  }
}

int cmd_decrypt(const Options& o) {
  if (o.in_path.empty() || o.out_path.empty()) throw InputError("decrypt needs --in and --out");
  check_distinct(o.in_path, o.out_path);
  const CipherKey key = key_from_json(read_file(o.key_path));
  const Transmission t = transmission_from_json(read_file(o.in_path));
  const ModeConfig cfg = mode_config(key, t.mode);
  std::vector<PlainBlock> blocks;
  try {
    blocks = t.mode == Mode::Measured ? mode1_decrypt(key, t, cfg) : mode2_decrypt(key, t, cfg);
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    block_diagnostics(key, t);
    return kIntegrity;
  }
  write_file(o.out_path, pack_bytes(blocks));
  if (!o.json) std::cout << "decrypted " << blocks.size() << " blocks\n";
  return kOk;
}

int cmd_analyze(const Options& o) {
  const ProbeSettings probe{o.epsilon, o.probe_grid};
  ordered_json report;
  bool pass = false;
  if (o.kind == "theorem1") {
    Rng rng(o.seed);
    const Theorem1Report r = verify_theorem1(o.n, o.trials, rng, probe);
    report = theorem1_to_json(r);
    pass = r.pass();
  } else {
    const CipherKey key = load_key(o);
    const Ablation ablation = parse_ablation(o.ablate);
    const PlainBlock plain = plaintext_for(o, key);
    if (o.kind == "confusion") {
      const ConfusionReport r = confusion_check(key, ablation);
      const DependenceMatrix numeric = numeric_dependence_matrix(key, plain, probe, ablation);
      report = confusion_to_json(r);
      report["numeric"] = dependence_to_json(numeric, numeric.is_subset_of(r.matrix), o.epsilon, o.probe_grid);
      report["agreement"] = numeric.agreement(r.matrix);
      report["epsilon"] = o.epsilon;
      report["grid"] = o.probe_grid;
      pass = r.pass;
    } else if (o.kind == "diffusion") {
      const DiffusionProfile r = diffusion_profile(key, plain, o.epsilon, ablation);
      report = diffusion_to_json(r);
      report["grid"] = o.probe_grid;
      pass = r.pass;
    } else {
      throw InputError("unknown analysis '" + o.kind + "'");
    }
    report["ablation"] = o.ablate;
  }
  emit(o, report, o.kind + ": " + (pass ? "pass" : "fail") + "\n");
  return pass ? kOk : kNotPass;
}

int cmd_attack(const Options& o) {
  Rng rng(o.seed);
  AttackReport report;
  std::ostringstream summary;
  if (o.kind == "intercept") {
    const CipherKey key = load_key(o);
    if (o.eve != "on" && o.eve != "off") throw InputError("--eve must be on or off");
    report = detection_experiment(key, plaintext_for(o, key), o.repetitions, o.eve == "on",
                                  static_cast<std::size_t>(o.trials), rng);
    summary << "detection rate " << report.estimates.at("detection_rate").probability
            << " (predicted " << report.values.at("predicted_detection_rate") << ")\n";
  } else if (o.kind == "stats") {
    const CipherKey key = load_key(o);
    report = marginal_estimation_attack(key, plaintext_for(o, key), static_cast<std::size_t>(o.samples),
                                        rng, parse_ablation(o.ablate))
                 .report;
    summary << "max residual " << report.values.at("max_residual") << " rad\n";
  } else if (o.kind == "brute") {
    const CipherKey key = generate_key(o.n, o.grid, rng);
    const PlainBlock plain{Bitstring(o.n, static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{1} << o.n)))};
    const BruteForceResult r = brute_force_key_recovery(o.n, o.grid, plain, encrypt_block(key, plain).state);
    bool found = false;
    for (const CipherKey& k : r.consistent) found = found || k == key;
    report.attack = "brute";
    report.trials = 1;
    report.parameters = {{"n", o.n}, {"N", o.grid}};
    report.exact["enumerated"] = r.enumerated.str();
    report.exact["keyspace"] = keyspace_size(o.n, o.grid).count.str();
    report.values["consistent_keys"] = static_cast<double>(r.consistent.size());
    report.values["true_key_found"] = found ? 1 : 0;
    report.values["seconds"] = r.seconds;
    summary << "enumerated " << r.enumerated.str() << " keys, " << r.consistent.size()
            << " consistent, true key " << (found ? "found" : "missing") << "\n";
  } else if (o.kind == "bounds") {
    const ConfigCountBounds b = config_count_bounds(o.n, o.length);
    report.attack = "bounds";
    report.parameters = {{"n", o.n}, {"L", static_cast<double>(o.length)}};
    report.exact["lower"] = b.lower.str();
    report.exact["upper"] = b.upper.str();
    report.values["log2_lower"] = b.log2_lower;
    report.values["log2_upper"] = b.log2_upper;
    summary << "lower " << b.lower.str() << "\nupper " << b.upper.str() << "\n";
  } else {
    throw InputError("unknown attack '" + o.kind + "'");
  }
  emit(o, attack_to_json(report), summary.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum block cipher simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_flag("--json", o.json, "Machine-readable stdout");

  auto positive = CLI::PositiveNumber;

  auto* keygen = app.add_subcommand("keygen", "Generate a key");
  keygen->add_option("--n", o.n, "Qubits per block");
  keygen->add_option("--N", o.grid, "Angle grid size");
  keygen->add_option("--out", o.out_path, "Key file")->required();

  auto* keyspace = app.add_subcommand("keyspace", "Print the keyspace size");
  keyspace->add_option("--n", o.n);
  keyspace->add_option("--N", o.grid);
  keyspace->add_option("--out", o.out_path);

  auto* encrypt = app.add_subcommand("encrypt", "Encrypt raw bytes");
  encrypt->add_option("--key", o.key_path)->required();
  encrypt->add_option("--mode", o.mode, "m1 or m2");
  encrypt->add_option("--in", o.in_path)->required();
  encrypt->add_option("--out", o.out_path)->required();

  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a transmission");
  decrypt->add_option("--key", o.key_path)->required();
  decrypt->add_option("--in", o.in_path)->required();
  decrypt->add_option("--out", o.out_path)->required();

  auto* analyze = app.add_subcommand("analyze", "Confusion, diffusion or theorem1 report");
  analyze->add_option("kind", o.kind)->required()->check(CLI::IsMember({"confusion", "diffusion", "theorem1"}));
  analyze->add_option("--key", o.key_path, "Key file (default: seed-42 n=8 key)");
  analyze->add_option("--ablate", o.ablate)->check(
      CLI::IsMember({"step1-only", "through-step2", "through-step3", "full"}));
  analyze->add_option("--epsilon", o.epsilon)->check(positive);
  analyze->add_option("--grid", o.probe_grid)->check(positive);
  analyze->add_option("--trials", o.trials)->check(positive);
  analyze->add_option("--n", o.n, "Qubits for theorem1");
  analyze->add_option("--plaintext", o.plaintext);
  analyze->add_option("--out", o.out_path);

  auto* attack = app.add_subcommand("attack", "Adversary experiments");
  attack->add_option("kind", o.kind)->required()->check(CLI::IsMember({"intercept", "stats", "brute", "bounds"}));
  attack->add_option("--key", o.key_path);
  attack->add_option("--r", o.repetitions)->check(positive);
  attack->add_option("--eve", o.eve)->check(CLI::IsMember({"on", "off"}));
  attack->add_option("--trials", o.trials)->check(positive);
  attack->add_option("--samples", o.samples)->check(positive);
  attack->add_option("--ablate", o.ablate)->check(
      CLI::IsMember({"step1-only", "through-step2", "through-step3", "full"}));
  attack->add_option("--plaintext", o.plaintext);
  attack->add_option("--n", o.n);
  attack->add_option("--N", o.grid);
  attack->add_option("--L", o.length)->check(positive);
  attack->add_option("--out", o.out_path);

  // The propagation check defaults to the largest supported register.
  analyze->preparse_callback([&](std::size_t) { o.n = 6; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*keygen) return cmd_keygen(o);
    if (*keyspace) return cmd_keyspace(o);
    if (*encrypt) return cmd_encrypt(o);
    if (*decrypt) return cmd_decrypt(o);
    if (*analyze) return cmd_analyze(o);
    if (*attack) return cmd_attack(o);
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kIntegrity;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
