#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewlab/harness.hpp"

namespace skewlab {

// Ready-made study grids, one command each. fig2/fig3 sweep the
// backbone family under balanced testing at sizes 1 and 5, fig4 the
// overlap family at depths 1 and 5, fig6 the Gaussian-backbone hybrid.
// sup-cv reruns the backbone and overlap studies under 10-fold
// stratified cross-validation at depths 1 and 5.
inline std::vector<ExperimentGrid> preset_grids(const std::string& name, uint64_t seed) {
    const std::vector<int> all5 = {1, 2, 3, 4, 5};
    const std::vector<int> hu = {2, 4, 8, 16};
    const std::vector<int> k10 = [] {
        std::vector<int> v(10);
        std::iota(v.begin(), v.end(), 1);
        return v;
    }();
    const std::vector<double> fracs(kMinorityFractions.begin(), kMinorityFractions.end());

    ExperimentGrid grid;
    grid.hidden_units = hu;
    grid.seeds = {seed};

    if (name == "fig2" || name == "fig3") {
        grid.family = Family::backbone;
        grid.c = all5;
        grid.s = {name == "fig2" ? 1 : 5};
        grid.b = all5;
        grid.depths = all5;
        return {grid};
    }
    if (name == "fig4") {
        grid.family = Family::overlap;
        grid.k = k10;
        grid.minority_frac = fracs;
        grid.depths = {1, 5};
        return {grid};
    }
    if (name == "fig6") {
        grid.family = Family::gaussian_backbone;
        grid.v = all5;
        grid.b = all5;
        grid.depths = all5;
        return {grid};
    }
    if (name == "sup-cv") {
        grid.regimen = {Regimen::Kind::stratified_cv, 10};
        grid.depths = {1, 5};
        std::vector<ExperimentGrid> grids;
        grid.family = Family::backbone;
        grid.c = all5;
        grid.b = all5;
        grid.s = {1};
        grids.push_back(grid);
        grid.s = {5};
        grids.push_back(grid);
        grid.family = Family::overlap;
        grid.c.clear();
        grid.s.clear();
        grid.b.clear();
        grid.k = k10;
        grid.minority_frac = fracs;
        grids.push_back(grid);
        return grids;
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected fig2, fig3, fig4, fig6 or sup-cv)");
}

}  // namespace skewlab
