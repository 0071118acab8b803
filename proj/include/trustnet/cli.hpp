#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace trustnet {

// Subcommand bodies behind the argv front end. Each returns a process exit
// code; config problems surface as ConfigError (mapped to exit 2 at the CLI
// boundary) and runtime failures as the simulation exceptions (exit 3).
int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, const std::string& format);
int cmd_sweep(const std::string& config_path, int jobs, const std::string& out_path,
              const std::string& format);
int cmd_dynamics(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path, const std::string& format);
int cmd_validate(const std::string& config_path);

} // namespace trustnet
