#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hb/discretize.hpp"
#include "hb/functionals.hpp"
#include "hb/oracle.hpp"
#include "hb/partitions.hpp"
#include "hb/problem.hpp"

namespace hb {

/// One experiment: a problem plus numeric/oracle/search settings, parsed from
/// a single JSON document. Parse errors carry the offending field path.
struct ExperimentConfig {
    std::string id;
    ProblemSpec problem;
    quad::QuadConfig quad;
    OracleConfig oracle;
    int search_budget = 120;
    std::uint64_t search_seed = 7;
    std::string out_json;
    std::string out_csv;
};

ExperimentConfig parse_config(const nlohmann::json& j, const std::string& origin);
ExperimentConfig load_config(const std::string& path);
WeightSpec parse_weight(const nlohmann::json& j, const std::string& path);
Kernel parse_kernel(const nlohmann::json& j, const std::string& path);

/// Serialize a real so that +inf survives JSON (numbers when finite, the
/// string "inf" otherwise).
nlohmann::json jreal(double x);
double jreal_parse(const nlohmann::json& v);

nlohmann::json run_functionals(const ExperimentConfig& cfg, const std::vector<std::string>& which);
nlohmann::json run_partitions(const ExperimentConfig& cfg, DCondition which, int budget,
                              std::uint64_t seed);
nlohmann::json run_discretize(const ExperimentConfig& cfg, int mu,
                              const std::vector<std::string>& emit);
nlohmann::json run_oracle(const ExperimentConfig& cfg);

struct EquivalenceRow {
    std::string id;
    std::string regime;
    double a_sum = kNaN;        ///< sum of the regime's conditions (raw scale)
    double predicted_c = kNaN;  ///< constant predicted from the conditions
    double d_sum = kNaN;        ///< searched discrete sum (NaN when not defined)
    double c_lb = kNaN;         ///< oracle lower bound
    double r1 = kNaN;           ///< predicted_c / c_lb
    double r2 = kNaN;           ///< a_sum / d_sum
    bool bounded = false;
    std::string note;
};

/// Evaluate every config (sorted by filename), in parallel up to HB_THREADS.
std::vector<EquivalenceRow> run_equivalence(const std::vector<std::string>& config_paths);
std::string equivalence_csv(const std::vector<EquivalenceRow>& rows);
std::string equivalence_table(const std::vector<EquivalenceRow>& rows);

int hb_threads();  ///< HB_THREADS env cap, default hardware concurrency

}  // namespace hb
