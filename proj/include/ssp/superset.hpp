#pragma once

#include <optional>

#include "ssp/hankel_subspace.hpp"
#include "ssp/pruning.hpp"

namespace ssp {

struct SupersetConfig {
    SelectionConfig selection;
    std::optional<double> epsilon2; // default 10 * selection.sigma
    GapMethod gap_method = GapMethod::closed_form;
};

double resolved_epsilon2(const SupersetConfig& config);

// Superset selection followed by pruning and the final least-squares fit.
// Throws EmptyEstimateError when the selection step keeps no atom.
RecoveryResult superset_recover(const Measurement& y, const SupersetConfig& config);

} // namespace ssp
