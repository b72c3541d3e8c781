#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace wsabi {

/// The likelihood oracle every estimator consumes: a positive-valued function
/// with a declared dimension and an evaluation counter.
class LikelihoodFn {
public:
    using Fn = std::function<double(const Eigen::VectorXd&)>;

    LikelihoodFn(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {
        if (dim_ < 1) throw std::invalid_argument("LikelihoodFn: dimension must be >= 1");
        if (!fn_) throw std::invalid_argument("LikelihoodFn: empty function");
    }

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
        if (x.size() != dim_) throw std::invalid_argument("LikelihoodFn: dimension mismatch");
        ++count_;
        return fn_(x);
    }

    int dim() const { return dim_; }
    long long evaluations() const { return count_; }
    void reset_count() const { count_ = 0; }

private:
    int dim_;
    Fn fn_;
    mutable long long count_ = 0;
};

struct Budget {
    long long max_samples = std::numeric_limits<long long>::max();
    double max_seconds = std::numeric_limits<double>::infinity();

    bool bounded() const {
        return max_samples != std::numeric_limits<long long>::max() ||
               std::isfinite(max_seconds);
    }
};

struct TraceRecord {
    long long n_samples = 0;
    double wall_clock_s = 0.0;
    double z_mean = 0.0;
    double z_variance = 0.0;
};

struct RunTrace {
    std::string method;
    std::uint64_t seed = 0;
    std::vector<TraceRecord> records;
    bool warning = false;  // e.g. a fully-rejected AIS chain
    bool error = false;    // aborted; records hold the partial trace
    std::string message;
};

/// WSABI_REFERENCE_MODE=1 forces single-threaded execution and a deterministic
/// virtual clock (one second per likelihood evaluation) so traces are
/// byte-identical across reruns.
bool reference_mode();

/// Monotonic clock around an estimator loop. In reference mode the reading is
/// the oracle's evaluation count instead of real time.
class Stopwatch {
public:
    explicit Stopwatch(const LikelihoodFn& fn)
        : fn_(&fn), virtual_(reference_mode()),
          t0_(std::chrono::steady_clock::now()), count0_(fn.evaluations()) {}

    double seconds() const {
        if (virtual_) return static_cast<double>(fn_->evaluations() - count0_);
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    const LikelihoodFn* fn_;
    bool virtual_;
    std::chrono::steady_clock::time_point t0_;
    long long count0_;
};

/// splitmix64; used to derive per-step and per-chain RNG seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace wsabi
