#pragma once

#include <string>

#include "troplef/tropical.hpp"

namespace troplef {

/// A built-in input complex. Tropical fixtures carry the full polytope +
/// subdivision setup; the octahedron is a plain 2-sphere complex.
struct Fixture {
    std::string name;
    bool tropical = false;
    TropicalSetup setup;
    Complex complex;  // non-tropical fixtures

    const Complex& k() const { return tropical ? setup.k : complex; }
};

/// Fixtures are generated, not stored, so coordinates and cell orderings are
/// definitionally exact. Throws Error("UnknownFixture").
Fixture fixture(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace troplef
