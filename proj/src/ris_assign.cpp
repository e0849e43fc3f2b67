#include "vlcris/ris_assign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlcris/mobility.hpp"
#include "vlcris/rng.hpp"

namespace vlcris::ris_assign {

namespace {

// Column index of an AP inside the candidate list, -1 if absent.
int column_of(const std::vector<int>& candidates, int ap) {
    auto it = std::lower_bound(candidates.begin(), candidates.end(), ap);
    if (it == candidates.end() || *it != ap) return -1;
    return static_cast<int>(it - candidates.begin());
}

// Per-candidate reflected-gain sums for an assignment.
Eigen::VectorXd ris_sums(const AssignmentProblem& problem, const Assignment& assignment) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(problem.n_candidates());
    for (int j = 0; j < static_cast<int>(assignment.element_to_ap.size()); ++j) {
        int col = column_of(problem.candidates, assignment.element_to_ap[j]);
        if (col >= 0) sums(col) += problem.element_gain(j, col);
    }
    return sums;
}

double objective_from_sums(const AssignmentProblem& problem, const Eigen::VectorXd& sums) {
    double total = 0.0;
    for (int c = 0; c < problem.n_candidates(); ++c) {
        const double h = problem.base_gain(c) + sums(c);
        total += problem.weight(c) * h * h;
    }
    return total;
}

}  // namespace

double total_snr(const AssignmentProblem& problem, const Assignment& assignment) {
    return objective_from_sums(problem, ris_sums(problem, assignment));
}

double combined_rate_of(const AssignmentProblem& problem, const Assignment& assignment) {
    return optics::achievable_rate(problem.bandwidth, total_snr(problem, assignment));
}

Assignment brute_force_assign(const AssignmentProblem& problem, std::uint64_t guard) {
    const int m = problem.n_elements();
    const int c = problem.n_candidates();
    if (c == 0) throw std::domain_error("brute_force_assign: empty candidate set");
    if (m == 0) return Assignment{};

    double combos = std::pow(static_cast<double>(c), m);
    if (combos > static_cast<double>(guard))
        throw std::domain_error(
            "brute_force_assign: enumeration guard exceeded; use coordinate_ascent_assign");

    // Odometer over candidate columns in lexicographic order; strict
    // improvement keeps the lexicographically smallest optimum.
    std::vector<int> cols(m, 0);
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(c);
    for (int j = 0; j < m; ++j) sums(0) += problem.element_gain(j, 0);

    std::vector<int> best_cols = cols;
    double best = objective_from_sums(problem, sums);

    while (true) {
        int j = m - 1;
        while (j >= 0) {
            sums(cols[j]) -= problem.element_gain(j, cols[j]);
            if (++cols[j] < c) {
                sums(cols[j]) += problem.element_gain(j, cols[j]);
                break;
            }
            cols[j] = 0;
            sums(0) += problem.element_gain(j, 0);
            --j;
        }
        if (j < 0) break;
        double value = objective_from_sums(problem, sums);
        if (value > best) {
            best = value;
            best_cols = cols;
        }
    }

    Assignment out;
    out.element_to_ap.resize(m);
    for (int j = 0; j < m; ++j) out.element_to_ap[j] = problem.candidates[best_cols[j]];
    return out;
}

Assignment coordinate_ascent_assign(const AssignmentProblem& problem, int max_rounds) {
    const int m = problem.n_elements();
    const int c = problem.n_candidates();
    if (c == 0) throw std::domain_error("coordinate_ascent_assign: empty candidate set");
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");

    std::vector<int> cols(m);
    for (int j = 0; j < m; ++j) cols[j] = problem.closest_candidate.empty()
                                              ? 0
                                              : problem.closest_candidate[j];

    Eigen::VectorXd sums = Eigen::VectorXd::Zero(c);
    for (int j = 0; j < m; ++j) sums(cols[j]) += problem.element_gain(j, cols[j]);
    double value = objective_from_sums(problem, sums);

    for (int round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (int j = 0; j < m; ++j) {
            const int cur = cols[j];
            int best_col = cur;
            double best_value = value;
            for (int cand = 0; cand < c; ++cand) {
                if (cand == cur) continue;
                // O(1) delta: only two candidate SNR terms move.
                const double h_cur = problem.base_gain(cur) + sums(cur);
                const double h_cur_new = h_cur - problem.element_gain(j, cur);
                const double h_cand = problem.base_gain(cand) + sums(cand);
                const double h_cand_new = h_cand + problem.element_gain(j, cand);
                const double delta =
                    problem.weight(cur) * (h_cur_new * h_cur_new - h_cur * h_cur) +
                    problem.weight(cand) * (h_cand_new * h_cand_new - h_cand * h_cand);
                if (value + delta > best_value) {
                    best_value = value + delta;
                    best_col = cand;
                }
            }
            if (best_col != cur) {
                sums(cur) -= problem.element_gain(j, cur);
                sums(best_col) += problem.element_gain(j, best_col);
                cols[j] = best_col;
                value = objective_from_sums(problem, sums);  // re-anchor, avoids drift
                changed = true;
            }
        }
        if (!changed) break;
    }

    Assignment out;
    out.element_to_ap.resize(m);
    for (int j = 0; j < m; ++j) out.element_to_ap[j] = problem.candidates[cols[j]];
    return out;
}

AssignmentProblem make_problem(const DatasetScenario& scenario,
                               const optics::Receiver& rx,
                               const std::vector<int>& candidates,
                               const std::vector<geometry::VerticalCylinder>& blockers) {
    AssignmentProblem problem;
    problem.candidates = candidates;
    problem.bandwidth = scenario.noise.bandwidth;

    const int m = static_cast<int>(scenario.elements.size());
    const int c = static_cast<int>(candidates.size());
    problem.base_gain.resize(c);
    problem.weight.resize(c);
    problem.element_gain.resize(m, c);
    problem.closest_candidate.resize(m);

    const double noise_power = scenario.noise.psd * scenario.noise.bandwidth;
    std::span<const geometry::VerticalCylinder> hop_blockers =
        scenario.ris_blockable ? std::span<const geometry::VerticalCylinder>(blockers)
                               : std::span<const geometry::VerticalCylinder>();

    for (int col = 0; col < c; ++col) {
        const auto& ap = scenario.aps[candidates[col]];
        const int indicator = mobility::blockage_indicator(ap.position, rx.position, blockers);
        const double los = optics::lambertian_gain(ap, rx);
        problem.base_gain(col) = indicator * los;
        const double p = rx.responsivity * ap.optical_power;
        problem.weight(col) = p * p / noise_power;
        for (int j = 0; j < m; ++j)
            problem.element_gain(j, col) =
                optics::steered_element_gain(ap, scenario.elements[j], rx, hop_blockers);
    }

    for (int j = 0; j < m; ++j) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int col = 0; col < c; ++col) {
            double d = (scenario.aps[candidates[col]].position -
                        scenario.elements[j].midpoint)
                           .norm();
            if (d < best_d) {
                best_d = d;
                best = col;
            }
        }
        problem.closest_candidate[j] = best;
    }
    return problem;
}

TrainingSet generate_dataset(const DatasetScenario& scenario, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("dataset size must be >= 1");
    const int n = static_cast<int>(scenario.aps.size());
    const int m = static_cast<int>(scenario.elements.size());

    TrainingSet set;
    set.n_aps = n;
    set.n_elements = m;
    set.inputs.resize(count, n + 2);
    set.labels.resize(count, m);
    set.oracle.resize(count);

    const auto disc = mobility::sample_disc(scenario.disc_samples, scenario.disc_radius);

    for (int row = 0; row < count; ++row) {
        rng::Stream instance(rng::derive_stream(seed, 0x6473ULL + row));

        optics::Receiver rx = scenario.receiver;
        rx.position = geometry::Vec3(instance.uniform(0.0, scenario.room.width),
                                     instance.uniform(0.0, scenario.room.depth),
                                     scenario.receiver.position.z());

        std::vector<geometry::VerticalCylinder> blockers;
        blockers.reserve(scenario.n_blockers);
        for (int b = 0; b < scenario.n_blockers; ++b)
            blockers.push_back({{instance.uniform(0.0, scenario.room.width),
                                 instance.uniform(0.0, scenario.room.depth)},
                                scenario.blocker_radius,
                                scenario.blocker_height});

        std::vector<double> xi(n);
        std::vector<int> candidates;
        for (int i = 0; i < n; ++i) {
            xi[i] = mobility::blockage_degree(scenario.aps[i].position, rx.position,
                                              blockers, disc);
            if (xi[i] < 0.5) candidates.push_back(i);
        }
        if (candidates.empty()) {
            // Bridge situation: the sole candidate is the closest AP.
            int closest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                double d = (scenario.aps[i].position - rx.position).norm();
                if (d < best) {
                    best = d;
                    closest = i;
                }
            }
            candidates.push_back(closest);
        }

        auto problem = make_problem(scenario, rx, candidates, blockers);

        Assignment label;
        const double combos =
            std::pow(static_cast<double>(candidates.size()), m);
        if (combos <= static_cast<double>(scenario.enumeration_guard)) {
            label = brute_force_assign(problem, scenario.enumeration_guard);
            set.oracle[row] = "brute-force";
        } else {
            label = coordinate_ascent_assign(problem);
            set.oracle[row] = "coordinate-ascent";
        }

        for (int i = 0; i < n; ++i) set.inputs(row, i) = xi[i];
        set.inputs(row, n) = rx.position.x();
        set.inputs(row, n + 1) = rx.position.y();
        for (int j = 0; j < m; ++j) set.labels(row, j) = label.element_to_ap[j];
    }
    return set;
}

}  // namespace vlcris::ris_assign
