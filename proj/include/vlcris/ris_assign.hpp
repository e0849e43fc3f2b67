#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "vlcris/optics.hpp"

namespace vlcris::ris_assign {

/// Element-to-AP association: entry j is the (0-based) AP index serving
/// element j. File formats write AP numbers 1-based.
struct Assignment {
    std::vector<int> element_to_ap;
};

/// Self-contained optimization instance for one decision epoch. Candidate
/// APs are listed in ascending index order; `element_gain(j, c)` is the
/// reflected-path gain of element j when steered for candidate c at the
/// current receiver position.
struct AssignmentProblem {
    std::vector<int> candidates;        // AP indices, ascending
    Eigen::VectorXd base_gain;          // per candidate: blockage-gated LoS gain
    Eigen::VectorXd weight;             // per candidate: (responsivity * power)^2 / noise power
    Eigen::MatrixXd element_gain;       // n_elements x n_candidates
    std::vector<int> closest_candidate; // per element: column of the nearest candidate
    double bandwidth = 2e7;

    int n_elements() const { return static_cast<int>(element_gain.rows()); }
    int n_candidates() const { return static_cast<int>(candidates.size()); }
};

/// Sum of per-candidate SNRs under an assignment; the combined rate is
/// monotone in this quantity.
double total_snr(const AssignmentProblem& problem, const Assignment& assignment);

/// Combined achievable rate of an assignment.
double combined_rate_of(const AssignmentProblem& problem, const Assignment& assignment);

/// Exhaustive optimum over |candidates|^n_elements assignments; ties break
/// to the lexicographically smallest vector. Throws std::domain_error when
/// the candidate set is empty or the enumeration exceeds `guard`.
Assignment brute_force_assign(const AssignmentProblem& problem,
                              std::uint64_t guard = 1'000'000);

/// Greedy local search: start from each-element-to-closest-candidate and
/// re-optimize one element at a time until a fixed point or `max_rounds`.
/// Never returns an objective below the initialization's.
Assignment coordinate_ascent_assign(const AssignmentProblem& problem, int max_rounds = 16);

/// Supervised instances for the assignment network. `inputs` rows hold
/// (xi_1..xi_N, x, y) with raw positions in meters; labels are 0-based AP
/// indices per element.
struct TrainingSet {
    int n_aps = 0;
    int n_elements = 0;
    Eigen::MatrixXd inputs;   // count x (n_aps + 2)
    Eigen::MatrixXi labels;   // count x n_elements
    std::vector<std::string> oracle;  // "brute-force" or "coordinate-ascent" per row
};

/// Static scene used to sample labeled blockage instances.
struct DatasetScenario {
    optics::Room room;
    std::vector<optics::AccessPoint> aps;
    std::vector<optics::RisElement> elements;
    optics::Receiver receiver;  // position replaced per instance
    optics::NoiseModel noise;
    int n_blockers = 3;
    double blocker_radius = 0.3;
    double blocker_height = 1.8;
    int disc_samples = 16;
    double disc_radius = 0.05;
    bool ris_blockable = true;
    std::uint64_t enumeration_guard = 1'000'000;
};

/// Samples receiver positions and blocker placements, computes blockage
/// degrees, and labels each instance with the oracle assignment (brute
/// force under the guard, coordinate ascent above it). Deterministic given
/// the seed.
TrainingSet generate_dataset(const DatasetScenario& scenario, int count, std::uint64_t seed);

/// Builds the per-instance optimization problem for a candidate set at a
/// fixed receiver position. Exposed for dataset generation and simulation.
AssignmentProblem make_problem(const DatasetScenario& scenario,
                               const optics::Receiver& rx,
                               const std::vector<int>& candidates,
                               const std::vector<geometry::VerticalCylinder>& blockers);

}  // namespace vlcris::ris_assign
