#include "ssp/superset.hpp"

#include "ssp/errors.hpp"

namespace ssp {

double resolved_epsilon2(const SupersetConfig& config) {
    return config.epsilon2 ? *config.epsilon2 : 10.0 * config.selection.sigma;
}

RecoveryResult superset_recover(const Measurement& y, const SupersetConfig& config) {
    SupersetSelection selection = select_superset(y, config.selection);
    if (selection.omega.empty()) throw EmptyEstimateError("superset selection kept no atom");
    const double eps2 = resolved_epsilon2(config);
    RecoveryResult out = prune(y, std::move(selection.omega), eps2, config.selection.execution, config.gap_method);
    out.gammas = std::move(selection.gammas);
    out.rank = selection.rank;
    out.epsilon1 = selection.epsilon1;
    out.warnings.insert(out.warnings.begin(), selection.warnings.begin(), selection.warnings.end());
    return out;
}

} // namespace ssp
