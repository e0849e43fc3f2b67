#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "vlcris/ocdma.hpp"
#include "vlcris/rng.hpp"

using namespace vlcris;
using ocdma::hadamard_codebook;

TEST_CASE("hadamard construction") {
    auto h2 = hadamard_codebook(2);
    CHECK(h2.codes(0, 0) == 1);
    CHECK(h2.codes(0, 1) == 1);
    CHECK(h2.codes(1, 0) == 1);
    CHECK(h2.codes(1, 1) == -1);

    for (int sf : {2, 4, 8, 16}) {
        auto book = hadamard_codebook(sf);
        for (int i = 0; i < sf; ++i) {
            CHECK(book.codes(0, i) == 1);  // row 0 is all-ones
            for (int j = 0; j < sf; ++j) {
                int dot = book.codes.row(i).dot(book.codes.row(j));
                CHECK(dot == (i == j ? sf : 0));
            }
        }
    }
    CHECK_THROWS_AS(hadamard_codebook(3), std::domain_error);
    CHECK_THROWS_AS(hadamard_codebook(0), std::domain_error);
}

TEST_CASE("spreading with DC offset") {
    auto book = hadamard_codebook(2);
    std::vector<int> one{1};
    auto f1 = ocdma::spread(one, book, 0, 1.0);
    CHECK(f1.chips(0) == 2.0);
    CHECK(f1.chips(1) == 2.0);

    std::vector<int> zero{0};
    auto f0 = ocdma::spread(zero, book, 1, 1.0);
    CHECK(f0.chips(0) == 0.0);
    CHECK(f0.chips(1) == 2.0);

    CHECK_THROWS_AS(ocdma::spread(one, book, 1, 0.5), std::invalid_argument);
}

TEST_CASE("unipolarity holds for every input with offset >= 1") {
    rng::Stream s(11);
    for (int sf : {2, 4, 8}) {
        auto book = hadamard_codebook(sf);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> bits;
            for (int b = 0; b < 8; ++b) bits.push_back(static_cast<int>(s.below(2)));
            int row = static_cast<int>(s.below(sf));
            double offset = s.uniform(1.0, 3.0);
            auto frame = ocdma::spread(bits, book, row, offset);
            CHECK(frame.chips.minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("despreading round trip: sign of the bit, magnitude SF") {
    rng::Stream s(23);
    for (int sf : {2, 4, 8}) {
        auto book = hadamard_codebook(sf);
        for (int row = 1; row < sf; ++row) {
            for (double offset : {1.0, 1.5, 2.0}) {
                std::vector<int> bits;
                for (int b = 0; b < 6; ++b) bits.push_back(static_cast<int>(s.below(2)));
                auto frame = ocdma::spread(bits, book, row, offset);
                auto corr = ocdma::despread(frame.chips, book, row);
                for (std::size_t i = 0; i < bits.size(); ++i)
                    CHECK(corr(static_cast<Eigen::Index>(i)) ==
                          (bits[i] ? double(sf) : -double(sf)));
            }
        }
    }
    auto book = hadamard_codebook(4);
    Eigen::VectorXd bad(6);
    bad.setZero();
    CHECK_THROWS_AS(ocdma::despread(bad, book, 1), std::invalid_argument);
}

TEST_CASE("superposition separates cleanly for every SF=4 row pair") {
    auto book = hadamard_codebook(4);
    for (int r1 = 1; r1 < 4; ++r1) {
        for (int r2 = 1; r2 < 4; ++r2) {
            if (r1 == r2) continue;
            for (int b1 : {0, 1}) {
                for (int b2 : {0, 1}) {
                    std::vector<int> bits1{b1}, bits2{b2};
                    auto f1 = ocdma::spread(bits1, book, r1, 1.0);
                    auto f2 = ocdma::spread(bits2, book, r2, 1.0);
                    Eigen::VectorXd mix = f1.chips + f2.chips;
                    CHECK(ocdma::despread(mix, book, r1)(0) == (b1 ? 4.0 : -4.0));
                    CHECK(ocdma::despread(mix, book, r2)(0) == (b2 ? 4.0 : -4.0));
                    // A row nobody transmitted on correlates to zero.
                    for (int r = 1; r < 4; ++r)
                        if (r != r1 && r != r2)
                            CHECK(ocdma::despread(mix, book, r)(0) == 0.0);
                }
            }
        }
    }
}

TEST_CASE("amplitude estimation recovers synchronous superpositions exactly") {
    auto book = hadamard_codebook(4);

    std::vector<int> bits{1, 0, 1};
    auto single = ocdma::spread(bits, book, 2, 1.0);
    auto est = ocdma::estimate_ap_powers(single.chips, book);
    CHECK(est(2) == 1.0);

    // Dyadic amplitudes combine without rounding, so recovery is exact.
    auto f1 = ocdma::spread(bits, book, 1, 1.0);
    auto f2 = ocdma::spread(bits, book, 2, 1.0);
    Eigen::VectorXd mix = 0.5 * f1.chips + 0.25 * f2.chips;
    est = ocdma::estimate_ap_powers(mix, book);
    CHECK(est(1) == 0.5);
    CHECK(est(2) == 0.25);
    CHECK(est(3) == 0.0);

    Eigen::VectorXd silent = Eigen::VectorXd::Zero(8);
    est = ocdma::estimate_ap_powers(silent, book);
    for (int r = 0; r < 4; ++r) CHECK(est(r) == 0.0);
}

TEST_CASE("exhaustive dyadic superpositions over all nonzero rows (SF=4)") {
    auto book = hadamard_codebook(4);
    const double amps[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<int> bits{1, 1};
    std::vector<Eigen::VectorXd> frames;
    for (int r = 1; r < 4; ++r) frames.push_back(ocdma::spread(bits, book, r, 1.0).chips);

    for (double a1 : amps)
        for (double a2 : amps)
            for (double a3 : amps) {
                Eigen::VectorXd mix = a1 * frames[0] + a2 * frames[1] + a3 * frames[2];
                auto est = ocdma::estimate_ap_powers(mix, book);
                CHECK(est(1) == a1);
                CHECK(est(2) == a2);
                CHECK(est(3) == a3);
            }
}
