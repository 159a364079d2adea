#pragma once

#include <string>

#include "material.hpp"

namespace vwtest {

using viscowave::material::CoupledModel;
using viscowave::material::MaterialRegion;
using viscowave::material::ModelKind;

inline MaterialRegion region(ModelKind kind, double c0, double c1, double a, double nu = 1.0, double rho = 1.0,
                             double x_lo = 0.0, double x_hi = 1.0, std::string name = "rod") {
    MaterialRegion r;
    r.name = std::move(name);
    r.kind = kind;
    r.c0 = c0;
    r.c1 = c1;
    r.a = a;
    r.nu = nu;
    r.rho = rho;
    r.x_lo = x_lo;
    r.x_hi = x_hi;
    return r;
}

inline CoupledModel single(MaterialRegion r) { return CoupledModel{{std::move(r)}}; }

inline CoupledModel halves(MaterialRegion left, MaterialRegion right) {
    left.x_lo = 0.0;
    left.x_hi = 0.5;
    right.x_lo = 0.5;
    right.x_hi = 1.0;
    if (left.name == right.name) right.name += "_right";
    return CoupledModel{{std::move(left), std::move(right)}};
}

inline CoupledModel elastic_rod(double c0 = 1.0, double rho = 1.0) {
    return single(region(ModelKind::Elastic, c0, 0.0, 0.0, 1.0, rho));
}

/// Table 1 Zener column.
inline CoupledModel table1_zener(double c1) { return single(region(ModelKind::Zener, 1.5, c1, 0.5)); }

}  // namespace vwtest
