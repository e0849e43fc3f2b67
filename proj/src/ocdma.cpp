#include "vlcris/ocdma.hpp"

#include <cmath>
#include <stdexcept>

namespace vlcris::ocdma {

Codebook hadamard_codebook(int spreading_factor) {
    if (spreading_factor < 2 || (spreading_factor & (spreading_factor - 1)) != 0)
        throw std::domain_error("spreading factor must be a power of two >= 2");

    Eigen::MatrixXi h(1, 1);
    h(0, 0) = 1;
    while (h.rows() < spreading_factor) {
        const int n = static_cast<int>(h.rows());
        Eigen::MatrixXi next(2 * n, 2 * n);
        next.topLeftCorner(n, n) = h;
        next.topRightCorner(n, n) = h;
        next.bottomLeftCorner(n, n) = h;
        next.bottomRightCorner(n, n) = -h;
        h = std::move(next);
    }
    return Codebook{spreading_factor, std::move(h)};
}

UnipolarFrame spread(std::span<const int> bits, const Codebook& book, int code_index,
                     double dc_offset) {
    if (dc_offset < 1.0)
        throw std::invalid_argument("dc offset below 1 would break unipolarity");
    const int sf = book.spreading_factor;
    UnipolarFrame frame;
    frame.dc_offset = dc_offset;
    frame.chips.resize(static_cast<Eigen::Index>(bits.size()) * sf);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const double symbol = 2.0 * bits[i] - 1.0;
        for (int c = 0; c < sf; ++c)
            frame.chips(static_cast<Eigen::Index>(i) * sf + c) =
                symbol * book.codes(code_index, c) + dc_offset;
    }
    return frame;
}

Eigen::VectorXd despread(const Eigen::VectorXd& sequence, const Codebook& book,
                         int code_index) {
    const int sf = book.spreading_factor;
    if (sequence.size() % sf != 0)
        throw std::invalid_argument("chip sequence length is not a multiple of SF");
    const Eigen::Index n_bits = sequence.size() / sf;
    const Eigen::VectorXd code = book.row(code_index);
    Eigen::VectorXd out(n_bits);
    for (Eigen::Index i = 0; i < n_bits; ++i)
        out(i) = sequence.segment(i * sf, sf).dot(code);
    return out;
}

Eigen::VectorXd estimate_ap_powers(const Eigen::VectorXd& received, const Codebook& book) {
    const int sf = book.spreading_factor;
    Eigen::VectorXd estimates = Eigen::VectorXd::Zero(sf);
    if (received.size() == 0) return estimates;
    for (int r = 0; r < sf; ++r) {
        const Eigen::VectorXd corr = despread(received, book, r);
        estimates(r) = corr.cwiseAbs().mean() / sf;
    }
    return estimates;
}

}  // namespace vlcris::ocdma
