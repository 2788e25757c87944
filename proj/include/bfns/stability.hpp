#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bfns/integrate.hpp"

namespace bfns {

/// Twin integration of two configurations on a shared discretization.
struct PairRun {
    std::vector<double> t;
    std::vector<double> w_sq;              // |v(t_n) - u(t_n)|^2
    double u_dissipation_integral = 0.0;   // int_tau^T ||u||^2 (trapezoid)
    double forcing_gap_integral = 0.0;     // int_tau^T |f_v - f_u|^2
};

/// Throws ParameterError when d, K, M, dt, tau or t_end differ.
PairRun pair_run(const SimConfig& cfg_u, const SimConfig& cfg_v, const SpectralField& u_tau,
                 const SpectralField& v_tau);

/// Perturbation grids. Zero entries are skipped (the bound is vacuous).
struct StabilityGrids {
    std::vector<double> eps;    // |v_tau - u_tau|
    std::vector<double> delta;  // |M - N|
    std::vector<double> eta;    // |f_v - f_u|
    std::uint64_t seed = 7;     // perturbation directions
};

struct StabilityRow {
    std::string kind;  // "initial", "cutoff" or "forcing"
    double eps = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double sup_w2 = 0.0;
    double denom = 0.0;  // |w_tau|^2 + |M-N|^2 int ||u||^2 + int |f_v - f_u|^2
    double ratio = 0.0;
    double gamma_hat = 0.0;  // slope of log(running sup |w|^2) against t - tau
    std::string status = "ok";
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    std::map<std::string, double> median_by_kind;
    /// Largest factor between a row ratio and the median of its kind.
    double max_spread = 0.0;
    double gamma_hat = 0.0;  // largest per-row rate
    std::size_t failed_rows = 0;
};

/// Least-squares slope of log(running sup of w_sq) over the samples where it is positive.
double fit_growth_rate(const std::vector<double>& t, const std::vector<double>& w_sq);

/// Runs one row per nonzero grid entry against the base trajectory from
/// u_tau. Cutoff rows require a finite base N.
StabilityReport continuity_sweep(const SimConfig& base, const SpectralField& u_tau, const StabilityGrids& grids,
                                 int jobs = 1);

}  // namespace bfns
