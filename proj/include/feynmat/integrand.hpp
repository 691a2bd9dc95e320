#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "feynmat/labels.hpp"
#include "feynmat/symanzik.hpp"
#include "feynmat/tensor_reduce.hpp"

namespace feynmat {

/// Σ coefficient · symbol with exact coefficients.
using LinearForm = std::map<std::string, Rational, NaturalLess>;
LinearForm to_linear_form(const MomentumExpr& e);
std::string to_string(const LinearForm& f);

/// ν_x + shift; ν_x stays symbolic.
struct Power {
    std::string base;
    int shift = 0;
    friend bool operator==(const Power&, const Power&) = default;
};
std::string to_string(const Power& p);

struct PropagatorSpec {
    std::string element;
    LinearForm momentum;
    std::string mass2;    // empty when massless
    Power power;
    int orientation = 1;  // momentum = orientation · (momentum of the input column)
};

/// ∫ Π_e d^D k_e Π_rows δ(row · k) Π_e 1/(k_e² + m_e²)^(ν_e + shift).
struct MomentumSpaceIntegrand {
    std::vector<std::string> loops;          // free integration momenta
    std::vector<LinearForm> deltas;          // over "k_<label>"
    std::size_t external_constraints = 0;    // deltas that involve legs only
    std::vector<PropagatorSpec> propagators;  // internal columns in natural order
};

/// Rows are brought to a canonical form first, so row operations, ±1 column
/// scalings and column swaps of the input give the same integrand.  Legs
/// without an entry in `leg_momenta` carry the symbol p_<label> in the
/// canonical orientation; supplied momenta refer to the input orientation.
MomentumSpaceIntegrand momentum_space(const RationalMatrix& m, const std::vector<std::string>& externals,
                                      const std::map<std::string, LinearForm>& leg_momenta = {},
                                      const std::map<std::string, std::string>& masses = {},
                                      const std::map<std::string, int>& shifts = {});
/// Needs the legs as columns (reduce with `externals` when the graph has legs).
MomentumSpaceIntegrand momentum_space(const FeynGraph& g, const ReducedForm& rf,
                                      const std::map<std::string, int>& shifts = {});

struct ParametricIntegrand {
    Polynomial first;
    std::optional<SecondSymanzik> second;  // absent with fewer than two legs
    std::vector<std::string> variables;    // edge variables of `first`
    std::vector<std::pair<std::string, Power>> powers;
};

/// Internal columns are put in natural order before anything is computed.
ParametricIntegrand parametric(const RepresentedMatroid& extended, const std::vector<std::string>& legs,
                               const std::vector<MomentumExpr>& momenta, const std::map<std::string, int>& shifts = {});
ParametricIntegrand parametric(const FeynGraph& g, const ReducedForm& rf, const std::map<std::string, int>& shifts = {});

struct IntegrandDocument {
    MomentumSpaceIntegrand momentum;
    ParametricIntegrand parametric;
};

IntegrandDocument integrand(const FeynGraph& g, const ReducedForm& rf, const std::map<std::string, int>& shifts = {});

std::string integrand_text(const IntegrandDocument& d);
/// {loops, deltas[], propagators[], psi{variables, terms[]}, phi{variables, terms[]}, powers[]}
std::string integrand_json(const IntegrandDocument& d);

}  // namespace feynmat
