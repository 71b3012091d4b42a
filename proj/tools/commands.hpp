#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace homdet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConsistency = 3;

struct CommandOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed; // overrides the config's seed
    std::optional<std::string> out_path;
    std::string format = "json";
    std::optional<std::string> preset;
};

int cmd_witness(const CommandOptions& opts);
int cmd_exact(const CommandOptions& opts);
int cmd_simulate(const CommandOptions& opts);
int cmd_circuit_verify(const CommandOptions& opts);

} // namespace homdet::cli
