#pragma once

#include <string>
#include <vector>

#include "hsasim/markov.hpp"
#include "hsasim/sampler.hpp"

namespace hsasim {

void write_model(const TransitionModel& model, const std::string& path);
TransitionModel read_model(const std::string& path);

void write_distributions(const DistributionSet& dists, const std::string& path);
DistributionSet read_distributions(const std::string& path);

void write_persistence(const std::vector<PairwiseMatrix>& report,
                       const std::string& path);

// Flat (matrix, origin level, destination level, probability) rows for
// heatmap rendering.
std::string persistence_heatmap_csv(const std::vector<PairwiseMatrix>& report);

void write_homogeneity(const std::vector<GapDiagnostic>& diag,
                       const std::string& path);

// Log-expense plot feed for the empirical distributions: one row per
// positive value, zero counts reported per stratum on the side.
void write_distribution_log_feed(const DistributionSet& dists,
                                 const std::string& csv_path,
                                 const std::string& zeros_json_path);

}  // namespace hsasim
