#include "vlcris/handover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vlcris/optics.hpp"

namespace vlcris::handover {

void validate(const HandoverConfig& config) {
    if (config.current_threshold <= 0.0)
        throw std::invalid_argument("handover: current threshold must be positive");
    if (config.signaling_bits <= 0.0)
        throw std::invalid_argument("handover: signaling size must be positive");
    if (config.ascent_max_rounds < 1)
        throw std::invalid_argument("handover: ascent rounds must be >= 1");
    if (config.method == AssignMethod::Ann && config.model == nullptr)
        throw std::invalid_argument("handover: ANN assignment needs a model");
}

double electrical_current(double xi, double responsivity, double los_gain,
                          double optical_power) {
    return (1.0 - xi) * responsivity * los_gain * optical_power;
}

int blockage_probability(double xi) { return xi >= 0.5 ? 1 : 0; }

int blockage_probability_threshold(double current, double threshold) {
    return current < threshold ? 1 : 0;
}

double handover_latency(double rate, double signaling_bits) {
    if (rate <= 0.0) throw std::domain_error("handover latency undefined at zero rate");
    return signaling_bits / rate;
}

namespace {

// Lazily evaluated element-gain matrix; a NaN marks a pair not yet probed.
class GainMemo {
  public:
    GainMemo(const StepInputs& inputs)
        : inputs_(inputs),
          values_(Eigen::MatrixXd::Constant(inputs.n_elements,
                                            static_cast<Eigen::Index>(inputs.aps.size()),
                                            std::numeric_limits<double>::quiet_NaN())) {}

    double at(int element, int ap) {
        double& v = values_(element, ap);
        if (std::isnan(v)) v = inputs_.element_gain(element, ap);
        return v;
    }

    double column_sum(int ap) {
        double sum = 0.0;
        for (int j = 0; j < inputs_.n_elements; ++j) sum += at(j, ap);
        return sum;
    }

  private:
    const StepInputs& inputs_;
    Eigen::MatrixXd values_;
};

std::vector<int> aps_by_distance(const StepInputs& inputs) {
    std::vector<int> order(inputs.aps.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inputs.aps[a].distance < inputs.aps[b].distance;
    });
    return order;
}

struct Candidate {
    bool found = false;
    int ap = -1;
    double rate = 0.0;
};

// All elements focused on the nearest AP that still has a usable reflected
// path; scans outward so a dead nearest mirror path cannot fabricate a hole.
Candidate bridge_candidate(const StepInputs& inputs, GainMemo& memo) {
    Candidate out;
    for (int ap : aps_by_distance(inputs)) {
        const double h = memo.column_sum(ap);
        if (h <= 0.0) continue;
        const double eta = inputs.aps[ap].weight * h * h;
        out.found = true;
        out.ap = ap;
        out.rate = optics::achievable_rate(inputs.bandwidth, eta);
        return out;
    }
    return out;
}

ris_assign::Assignment assign_soft(const StepInputs& inputs, const HandoverConfig& config,
                                   const std::vector<int>& candidates, GainMemo& memo) {
    if (config.method == AssignMethod::Ann)
        return ann::ann_predict(*config.model, inputs.xi_vector, inputs.rx_x, inputs.rx_y,
                                &candidates);

    ris_assign::AssignmentProblem problem;
    problem.candidates = candidates;
    problem.bandwidth = inputs.bandwidth;
    const int c = static_cast<int>(candidates.size());
    problem.base_gain.resize(c);
    problem.weight.resize(c);
    problem.element_gain.resize(inputs.n_elements, c);
    for (int col = 0; col < c; ++col) {
        const ApState& ap = inputs.aps[candidates[col]];
        problem.base_gain(col) = ap.los_indicator ? ap.los_gain : 0.0;
        problem.weight(col) = ap.weight;
        for (int j = 0; j < inputs.n_elements; ++j)
            problem.element_gain(j, col) = memo.at(j, candidates[col]);
    }
    problem.closest_candidate.resize(inputs.n_elements, 0);
    if (inputs.elem_ap_distance) {
        for (int j = 0; j < inputs.n_elements; ++j) {
            int best = 0;
            for (int col = 1; col < c; ++col)
                if ((*inputs.elem_ap_distance)(j, candidates[col]) <
                    (*inputs.elem_ap_distance)(j, candidates[best]))
                    best = col;
            problem.closest_candidate[j] = best;
        }
    }

    if (config.method == AssignMethod::BruteForce)
        return ris_assign::brute_force_assign(problem);
    return ris_assign::coordinate_ascent_assign(problem, config.ascent_max_rounds);
}

}  // namespace

HandoverRecord step(HandoverState& state, const StepInputs& inputs,
                    const HandoverConfig& config) {
    const int n = static_cast<int>(inputs.aps.size());
    if (n == 0) throw std::invalid_argument("handover step: empty AP list");

    ++state.steps;
    GainMemo memo(inputs);

    std::vector<int> clear;
    for (int i = 0; i < n; ++i) {
        const int blocked = config.rule == BlockageRule::BinaryApprox
                                ? blockage_probability(inputs.aps[i].xi)
                                : blockage_probability_threshold(
                                      inputs.aps[i].elec_current, config.current_threshold);
        if (!blocked) clear.push_back(i);
    }

    Decision kind = Decision::NoChange;
    std::vector<int> target;
    std::vector<int> assignment;
    double rate = 0.0;
    bool ris_path_available = false;

    auto try_bridge = [&]() {
        if (!config.ris_enabled) return false;
        Candidate c = bridge_candidate(inputs, memo);
        if (!c.found) return false;
        ris_path_available = true;
        kind = Decision::RisBridge;
        target = {c.ap};
        assignment.assign(inputs.n_elements, c.ap);
        rate = c.rate;
        return true;
    };

    bool connected = false;
    if (clear.empty()) {
        connected = try_bridge();
    } else if (clear.size() == 1) {
        const int ap = clear.front();
        double h = inputs.aps[ap].los_indicator ? inputs.aps[ap].los_gain : 0.0;
        if (config.ris_enabled) {
            assignment.assign(inputs.n_elements, ap);
            h += memo.column_sum(ap);
        }
        rate = optics::achievable_rate(inputs.bandwidth, inputs.aps[ap].weight * h * h);
        if (rate > 0.0) {
            kind = Decision::Hard;
            target = {ap};
            connected = true;
        } else {
            assignment.clear();
            connected = try_bridge();
        }
    } else {
        if (config.ris_enabled)
            assignment = assign_soft(inputs, config, clear, memo).element_to_ap;
        std::vector<double> etas;
        etas.reserve(clear.size());
        for (int i : clear) {
            double h = inputs.aps[i].los_indicator ? inputs.aps[i].los_gain : 0.0;
            for (int j = 0; j < inputs.n_elements && config.ris_enabled; ++j)
                if (assignment[j] == i) h += memo.at(j, i);
            etas.push_back(inputs.aps[i].weight * h * h);
        }
        rate = optics::combined_rate(inputs.bandwidth, etas);
        if (rate > 0.0) {
            kind = Decision::Soft;
            target = clear;
            connected = true;
        } else {
            assignment.clear();
            connected = try_bridge();
        }
    }

    HandoverRecord record;
    if (!connected) {
        ++state.hole_steps;
        if (ris_path_available) ++state.feasible_ris_holes;
        state.serving.clear();
        record.hole = true;
        record.serving = state.serving;
        return record;
    }

    const bool executed = target != state.serving;
    record.rate = rate;
    record.assignment = std::move(assignment);
    state.step_rate_sum += rate;

    if (executed) {
        record.decision = kind;
        record.latency = handover_latency(rate, config.signaling_bits);
        if (kind == Decision::Soft) {
            ++state.soft_count;
            state.rate_soft_sum += rate;
            state.latency_soft_sum += record.latency;
        } else {
            ++state.hard_count;
            state.rate_hard_sum += rate;
            state.latency_hard_sum += record.latency;
            if (kind == Decision::RisBridge) ++state.bridge_events;
        }
        state.serving = target;
    }
    record.serving = state.serving;
    return record;
}

}  // namespace vlcris::handover
