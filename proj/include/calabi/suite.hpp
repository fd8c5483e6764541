#ifndef CALABI_SUITE_HPP
#define CALABI_SUITE_HPP

#include "calabi/geometry.hpp"

namespace calabi {

// The standard test Hamiltonians (n = 1). All are built from plateau bumps
// with wide transitions so that 200-step integrations resolve every flow;
// the mix covers autonomous/time-dependent, signed, and multi-bump fields.
struct SuiteMember {
    std::string name;
    TimeDepField field;
};

std::vector<SuiteMember> standard_suite();

// Look up a member by name; throws std::invalid_argument listing the names.
TimeDepField suite_member(const std::string& name);

// The wide, low bump used as the base of graphical epsilon-families: flows
// stay far from the graphicality fold for the whole default schedule.
TimeDepField graphical_base();

// Parse "bump,height=H,rho=R,cx=..,cy=..,hx=..,hy=.." or a suite member name
// into a field (the cal CLI entry point).
TimeDepField parse_hamiltonian_spec(const std::string& spec);

} // namespace calabi

#endif // CALABI_SUITE_HPP
