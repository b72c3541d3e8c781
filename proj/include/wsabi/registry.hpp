#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsabi/run.hpp"
#include "wsabi/types.hpp"

namespace wsabi {

struct BenchmarkEntry {
    std::string id;
    int dim = 0;
    std::uint64_t seed = 0;
    bool analytic = false;                      // truth computable in closed form
    std::optional<double> ground_truth_log_z;   // in the benchmark's own scale
    double log_shift = 0.0;                     // for shifted likelihoods
    std::string provenance;
};

/// A benchmark instantiated and ready to run.
struct BenchmarkInstance {
    std::string id;
    LikelihoodFn likelihood;
    GaussianPrior prior;
    double truth_log_z = 0.0;  // same scale the likelihood reports in
    double log_shift = 0.0;
};

/// Built-in benchmark set plus an optional JSON overlay file
/// (id -> {dim, seed, ground_truth_log_z, provenance, ...}).
class BenchmarkRegistry {
public:
    static BenchmarkRegistry with_builtins();

    void load_overlay(const std::string& path);   // merges entries by id
    void save(const std::string& path) const;

    const std::vector<BenchmarkEntry>& entries() const { return entries_; }
    const BenchmarkEntry* find(const std::string& id) const;

    BenchmarkInstance instantiate(const std::string& id) const;

    /// Recompute ground truth by exhaustive sampling (or report that the
    /// benchmark is analytic). Updates the stored entry and returns it.
    /// Returns false (without changes) for analytic benchmarks.
    bool freeze_truth(const std::string& id, long long mc_samples, std::uint64_t mc_seed);

private:
    std::vector<BenchmarkEntry> entries_;
    BenchmarkEntry* find_mutable(const std::string& id);
};

}  // namespace wsabi
