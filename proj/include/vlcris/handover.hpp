#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "vlcris/ann.hpp"
#include "vlcris/ris_assign.hpp"

namespace vlcris::handover {

enum class BlockageRule { BinaryApprox, Threshold };
enum class AssignMethod { CoordinateAscent, BruteForce, Ann };

struct HandoverConfig {
    double current_threshold = 1e-8;  // [A]
    double signaling_bits = 1000.0;
    bool ris_enabled = true;
    BlockageRule rule = BlockageRule::BinaryApprox;
    AssignMethod method = AssignMethod::CoordinateAscent;
    int ascent_max_rounds = 16;
    const ann::AnnModel* model = nullptr;  // required for AssignMethod::Ann
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const HandoverConfig& config);

/// Photocurrent under partial blockage: (1 - xi) * r * h_los * P.
double electrical_current(double xi, double responsivity, double los_gain,
                          double optical_power);

/// Binary blockage decision from the blockage degree: 1 iff xi >= 0.5.
int blockage_probability(double xi);

/// Binary blockage decision from the realized photocurrent: 1 iff the
/// current falls strictly below the threshold.
int blockage_probability_threshold(double current, double threshold);

/// Signaling delay of one handover execution. Throws std::domain_error for
/// a non-positive rate; zero-rate steps are holes, not latency samples.
double handover_latency(double rate, double signaling_bits);

enum class Decision { NoChange, Hard, Soft, RisBridge };

/// Per-AP view of the channel at one decision epoch.
struct ApState {
    double xi = 0.0;
    double los_gain = 0.0;
    int los_indicator = 1;
    double elec_current = 0.0;
    double weight = 0.0;    // (responsivity * power)^2 / noise power
    double distance = 0.0;  // AP to receiver
};

/// Inputs to one decision step. `element_gain(j, i)` returns the reflected
/// gain of element j steered for AP i at the current receiver position; the
/// step memoizes columns so each pair is evaluated at most once.
struct StepInputs {
    std::vector<ApState> aps;
    int n_elements = 0;
    double bandwidth = 2e7;
    std::function<double(int element, int ap)> element_gain;
    const Eigen::MatrixXd* elem_ap_distance = nullptr;  // n_elements x n_aps
    Eigen::VectorXd xi_vector;  // for the ANN assignment path
    double rx_x = 0.0;
    double rx_y = 0.0;
};

struct HandoverRecord {
    Decision decision = Decision::NoChange;
    bool hole = false;
    double rate = 0.0;
    double latency = 0.0;
    std::vector<int> serving;     // serving set after the step
    std::vector<int> assignment;  // element -> AP index; empty without RIS
};

/// Mutable per-trial bookkeeping. Counters only move when the serving set
/// changes; bridge takeovers are counted in both hard_count and
/// bridge_events. Holes clear the serving set.
struct HandoverState {
    std::vector<int> serving;
    long hard_count = 0;
    long soft_count = 0;
    long bridge_events = 0;
    long hole_steps = 0;
    long feasible_ris_holes = 0;  // holes despite a usable reflected path
    long steps = 0;
    double rate_hard_sum = 0.0;
    double rate_soft_sum = 0.0;
    double latency_hard_sum = 0.0;
    double latency_soft_sum = 0.0;
    double step_rate_sum = 0.0;
};

/// One decision epoch: classify blockage, pick the serving configuration,
/// and update counters. Throws std::invalid_argument on an empty AP list.
HandoverRecord step(HandoverState& state, const StepInputs& inputs,
                    const HandoverConfig& config);

}  // namespace vlcris::handover
