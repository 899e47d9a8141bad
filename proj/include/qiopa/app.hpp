// Command-line front end: configuration, experiment orchestration and output files.
#pragma once

#include "qiopa/amplifier.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/io.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/tomography.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qiopa::app {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

// Invalid configuration value; the message names the field.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Reported operating point of the experiment.
inline constexpr double kReferenceGain = 1.19;
inline constexpr double kReferenceEta1 = 0.049;
inline constexpr double kReferenceEta2 = 0.042;
inline constexpr double kReferenceMaxCount = 1866.0;

enum class Target { rho, rho_prime };

struct RunConfig {
    double g = kReferenceGain;
    double eta1 = kReferenceEta1;
    double eta2 = kReferenceEta2;
    std::string qubit = "minus";  // H | V | plus | minus | "re,im,re,im"
    std::string cutoff = "auto";  // auto | N
    std::uint64_t seed = 12345;
    double epsilon_trunc = 1e-10;
    std::string out_dir = ".";

    int points = 32;
    std::string basis = "pm";       // pm | lr
    Target target = Target::rho;
    std::optional<double> scale;    // nullopt: largest expected count = kReferenceMaxCount
    Scheme scheme = Scheme::minimal;
    int boot = 200;
    bool noiseless = false;

    GainParams gain() const;
    LossSpec loss() const;
    PolarizationQubit injected() const;
    // Throws ConfigError naming the first invalid field.
    void validate() const;
    bool at_reference_point() const;
};

PolarizationQubit parse_qubit(const std::string& spec);
Cutoff parse_cutoff(const std::string& spec);

// Applies the keys present in a JSON config object onto `cfg`.
void apply_config_json(RunConfig& cfg, const json& j);

// Each command writes its files into cfg.out_dir and returns a summary.
json cmd_state(const RunConfig& cfg);
json cmd_fringe(const RunConfig& cfg);
json cmd_reduce(const RunConfig& cfg);
json cmd_tomo(const RunConfig& cfg);
json cmd_report(const RunConfig& cfg);

// Full CLI: parses args (without program name), runs, returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qiopa::app
