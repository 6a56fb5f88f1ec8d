#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/scenarios.hpp"

namespace qlab::catalog {

// Unknown entry names, unknown parameter keys, malformed or out-of-range
// values. The CLI maps this to its usage/config exit status.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParamType { integer, real, boolean, complex_pair, basis_spec, text };

struct ParamSpec {
    std::string key;
    ParamType type;
    std::string default_value; // textual, parsed exactly like a user value
    std::string description;
};

// Typed, validated view of an entry's parameters: schema defaults overlaid
// with user overrides. Construction rejects unknown keys and unparsable
// values, naming the offending key.
class Params {
public:
    Params(const std::vector<ParamSpec>& schema,
           const std::map<std::string, std::string>& overrides);

    int integer(const std::string& key) const;
    double real(const std::string& key) const;
    bool boolean(const std::string& key) const;
    cxd complex_pair(const std::string& key) const; // "re,im" or "re"
    Basis basis(const std::string& key) const;      // "z" | "x" | "bloch:<theta>,<phi>"
    std::string text(const std::string& key) const;

private:
    const ParamSpec& spec(const std::string& key, ParamType expected) const;

    std::vector<ParamSpec> schema_;
    std::map<std::string, std::string> values_;
};

struct Entry {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    std::function<scenarios::ScenarioReport(const Params&, std::uint64_t seed)> run;
};

// Every runnable entry, sorted by name; all are runnable with defaults only.
const std::vector<Entry>& entries();
const Entry* find(const std::string& name);

// Validates overrides against the entry schema and executes it.
scenarios::ScenarioReport run_by_name(const std::string& name,
                                      const std::map<std::string, std::string>& overrides,
                                      std::uint64_t seed);

// Human-readable catalog: name, description, parameter schema with defaults.
std::string listing();

// Two-spin states accepted by `state` parameters: up_up, up_down, down_up,
// down_down, singlet, triplet_zero, plus_plus, plus_minus.
StateVector named_two_spin_state(const std::string& name);

Basis parse_basis_spec(const std::string& spec);

} // namespace qlab::catalog
