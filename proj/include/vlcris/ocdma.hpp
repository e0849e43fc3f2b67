#pragma once

#include <Eigen/Dense>
#include <span>

namespace vlcris::ocdma {

/// Walsh-Hadamard spreading codebook (Sylvester construction). Row 0 is
/// all-ones and is reserved: it does not reject the DC offset, so usable
/// AP codes are rows 1..SF-1.
struct Codebook {
    int spreading_factor = 0;
    Eigen::MatrixXi codes;  // SF x SF, entries +/-1

    Eigen::VectorXd row(int index) const { return codes.row(index).cast<double>(); }
};

/// Builds the codebook for a power-of-two spreading factor. Throws
/// std::domain_error otherwise.
Codebook hadamard_codebook(int spreading_factor);

/// Nonnegative chip sequence after DC offsetting.
struct UnipolarFrame {
    Eigen::VectorXd chips;
    double dc_offset = 1.0;
};

/// Spreads a bit sequence with one code row: bit b maps to the bipolar
/// symbol 2b-1, each symbol multiplies the row, and the DC offset shifts
/// every chip to be nonnegative. Throws std::invalid_argument when the
/// offset is below 1.
UnipolarFrame spread(std::span<const int> bits, const Codebook& book, int code_index,
                     double dc_offset);

/// Per-bit correlation of a (possibly superposed) chip sequence with one
/// code row. Throws std::invalid_argument when the length is not a
/// multiple of the spreading factor.
Eigen::VectorXd despread(const Eigen::VectorXd& sequence, const Codebook& book,
                         int code_index);

/// Per-row amplitude estimates |correlation| / SF averaged over bit slots.
/// Exact for a synchronous orthogonal superposition on rows 1..SF-1.
Eigen::VectorXd estimate_ap_powers(const Eigen::VectorXd& received, const Codebook& book);

}  // namespace vlcris::ocdma
