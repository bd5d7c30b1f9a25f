#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mebo {

enum class ErrorCode {
    invalid_params = 1,
    degenerate_dataset,
    empty_subset,
    out_of_range,
    instance_too_large,
    spec_infeasible,
    invalid_argument,
    parse_error,
    io_error,
};

/// Exception type thrown by every mebo routine; carries a machine-readable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

using Index = std::size_t;
using IndexList = std::vector<Index>;
using Vector = std::vector<double>;
using PointRef = std::span<const double>;

/// Dense row-major n x d point matrix. Immutable once built.
class Dataset {
  public:
    Dataset(std::size_t n, std::size_t d, std::vector<double> values);

    static Dataset from_rows(const std::vector<Vector>& rows);

    std::size_t size() const noexcept { return n_; }
    std::size_t dim() const noexcept { return d_; }

    PointRef row(Index i) const noexcept { return {values_.data() + i * d_, d_}; }
    std::span<const double> values() const noexcept { return values_; }

    /// Copy of the selected rows, in the given order.
    Dataset subset(std::span<const Index> rows) const;

  private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> values_;
};

struct Ball {
    Vector center;
    double radius = 0.0;
};

/// Algorithm knobs. `meb_iters == 0` selects ceil(1/epsilon^2).
struct Params {
    double gamma = 0.1;
    double epsilon = 0.5;
    double delta = 0.5;
    double mu = 0.1;
    std::size_t meb_iters = 0;
    std::size_t forest_size = 1;
    std::size_t sequential_rounds = 0;
    std::uint64_t seed = 0;
    // Worker threads for node expansion and scoring; results never depend on it.
    unsigned threads = 1;
};

/// Quantities fixed by Params and the point count.
struct DerivedParams {
    std::size_t height = 1;       // tree height h
    std::size_t top_k = 0;        // size of the far set a node samples children from
    std::size_t sample_size = 1;  // children per internal node
    std::size_t inliers = 1;      // points covered by a candidate ball
    std::size_t meb_iters = 1;    // iterations of the approximate MEB routine
};

/// Checks everything about `p` except gamma. Throws invalid_params.
void validate_knobs(const Params& p);

/// Throws invalid_params or degenerate_dataset (k >= n).
DerivedParams derive_params(const Params& p, std::size_t n);

/// Sanity check for hand-built DerivedParams against a point count.
void validate_derived(const DerivedParams& dp, std::size_t n);

std::size_t default_meb_iters(double epsilon);

/// Ceiling that ignores floating noise below 1e-9 relative, so 1.1*0.4*10000 maps to 4400.
std::size_t ceil_count(double x);

struct Candidate {
    Vector center;
    IndexList path;         // dataset rows along the root-to-node path
    bool anchored = false;  // path is preceded by a virtual root point
    double score = 0.0;     // total variance of the inliers
    double radius = 0.0;    // distance to the m-th nearest row
    std::size_t tree = 0;
};

struct RecognitionResult {
    Ball ball;
    IndexList inliers;  // ascending row indices
    std::size_t candidates_evaluated = 0;
    double score = 0.0;
    DerivedParams derived;
};

double squared_distance(PointRef a, PointRef b) noexcept;

inline double distance(PointRef a, PointRef b) noexcept { return std::sqrt(squared_distance(a, b)); }

}  // namespace mebo
