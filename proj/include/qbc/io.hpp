#pragma once

// File formats. Statevectors are {"n": int, "amps": [[re, im], ...]} with
// amplitudes written to 17 significant digits, which round-trips doubles
// bit-exactly.

#include <json.hpp>

#include <string>
#include <string_view>

#include "qbc/adversary.hpp"
#include "qbc/analysis.hpp"
#include "qbc/cipher.hpp"
#include "qbc/keyschedule.hpp"
#include "qbc/modes.hpp"
#include "qbc/statevector.hpp"

namespace qbc {

std::string statevector_to_json(const StateVector& s);
/// Throws ParseError for malformed input and IntegrityError when the
/// amplitudes are not normalized.
StateVector statevector_from_json(std::string_view text);

std::string cipherblock_to_json(const CipherBlock& block);
CipherBlock cipherblock_from_json(std::string_view text);

std::string transmission_to_json(const Transmission& t);
Transmission transmission_from_json(std::string_view text);

std::string key_to_json(const CipherKey& key);
CipherKey key_from_json(std::string_view text);

nlohmann::ordered_json confusion_to_json(const ConfusionReport& report);
nlohmann::ordered_json diffusion_to_json(const DiffusionProfile& profile);
nlohmann::ordered_json dependence_to_json(const DependenceMatrix& matrix, bool pass, double epsilon,
                                          int grid);
nlohmann::ordered_json theorem1_to_json(const Theorem1Report& report);
nlohmann::ordered_json attack_to_json(const AttackReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace qbc
