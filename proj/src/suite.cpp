#include "calabi/suite.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace calabi {

namespace {

Box box2(double x0, double x1, double y0, double y1) {
    Box b;
    b.lo = Vec(2);
    b.hi = Vec(2);
    b.lo << x0, y0;
    b.hi << x1, y1;
    return b;
}

} // namespace

std::vector<SuiteMember> standard_suite() {
    std::vector<SuiteMember> suite;

    suite.push_back({"bump_unit",
                     autonomous(plateau_bump(box2(-1, 1, -1, 1), 0.30, 0.8))});

    suite.push_back({"bump_offset",
                     autonomous(scale(plateau_bump(box2(-1.2, 0.8, -0.9, 1.1), 0.25, 1.0), -0.6))});

    suite.push_back({"breather",
                     modulated(plateau_bump(box2(-1, 1, -1, 1), 0.35, 1.0),
                               [](double t) { return 0.5 + 0.5 * std::sin(2.0 * M_PI * t); })});

    suite.push_back({"two_hills",
                     autonomous(add(plateau_bump(box2(-1.0, -0.1, -0.5, 0.5), 0.30, 0.9),
                                    scale(plateau_bump(box2(0.1, 1.0, -0.4, 0.6), 0.20, 0.7), -0.55)))});

    suite.push_back({"ring_well",
                     autonomous(add(plateau_bump(box2(-1, 1, -1, 1), 0.50, 0.6),
                                    scale(plateau_bump(box2(-0.4, 0.4, -0.4, 0.4), 0.30, 0.4), -1.5)))});

    suite.push_back({"gentle", graphical_base()});

    return suite;
}

TimeDepField graphical_base() {
    return autonomous(plateau_bump(box2(-1, 1, -1, 1), 0.20, 0.35));
}

TimeDepField suite_member(const std::string& name) {
    for (const SuiteMember& m : standard_suite())
        if (m.name == name) return m.field;
    std::string names;
    for (const SuiteMember& m : standard_suite()) names += " " + m.name;
    throw std::invalid_argument("unknown suite member '" + name + "'; available:" + names);
}

TimeDepField parse_hamiltonian_spec(const std::string& spec) {
    if (spec.rfind("bump", 0) != 0) return suite_member(spec);

    std::map<std::string, double> kv{{"height", 1.0}, {"rho", 0.3},
                                     {"cx", 0.0},     {"cy", 0.0},
                                     {"hx", 1.0},     {"hy", 1.0}};
    std::stringstream ss(spec);
    std::string tok;
    std::getline(ss, tok, ','); // leading "bump"
    while (std::getline(ss, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad hamiltonian spec token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        if (!kv.count(key))
            throw std::invalid_argument("unknown hamiltonian spec key '" + key + "'");
        kv[key] = std::stod(tok.substr(eq + 1));
    }
    const Box b = box2(kv["cx"] - kv["hx"], kv["cx"] + kv["hx"],
                       kv["cy"] - kv["hy"], kv["cy"] + kv["hy"]);
    const double h = kv["height"];
    ScalarField f = plateau_bump(b, kv["rho"], std::abs(h));
    if (h < 0) f = scale(f, -1.0);
    return autonomous(f);
}

} // namespace calabi
