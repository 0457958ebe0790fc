#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qcs/error.hpp"
#include "qcs/neron.hpp"
#include "suite.hpp"

using namespace qcs;
using testsupport::mat;

namespace {

GaloisLattice split(int rank) {
    return GaloisLattice{rank, {}, IntMatrix::identity(rank), 1024};
}

} // namespace

TEST_CASE("inertia closure enumerates the finite matrix group") {
    SUBCASE("empty inertia closes to the identity alone") {
        auto cl = inertia_closure(split(2));
        REQUIRE(cl.size() == 1);
        CHECK(cl[0] == IntMatrix::identity(2));
    }
    SUBCASE("sign flip closes to two elements") {
        GaloisLattice l{1, {mat(1, 1, {-1})}, IntMatrix::identity(1), 1024};
        CHECK(inertia_closure(l).size() == 2);
    }
    SUBCASE("plane rotation of order four") {
        GaloisLattice l{2, {mat(2, 2, {0, -1, 1, 0})}, IntMatrix::identity(2), 1024};
        CHECK(inertia_closure(l).size() == 4);
    }
    SUBCASE("infinite groups trip the exploration bound") {
        GaloisLattice shear{2, {mat(2, 2, {1, 1, 0, 1})}, IntMatrix::identity(2), 64};
        CHECK_THROWS_AS(inertia_closure(shear), domain_error);
    }
    SUBCASE("non-invertible inertia is rejected") {
        GaloisLattice bad{1, {mat(1, 1, {2})}, IntMatrix::identity(1), 64};
        CHECK_THROWS_AS(inertia_closure(bad), domain_error);
    }
}

TEST_CASE("component groups from Galois lattices") {
    SUBCASE("split torus: free component group of the same rank") {
        FrobModule m = component_group(split(2));
        CHECK(m.group == FgAbGroup::free_of_rank(2));
        CHECK(m.frob.equals(GroupHom::identity(m.group)));
    }
    SUBCASE("ramified sign flip: component group of order two") {
        GaloisLattice l{1, {mat(1, 1, {-1})}, IntMatrix::identity(1), 1024};
        FrobModule m = component_group(l);
        CHECK(m.group == FgAbGroup{{2}});
        CHECK(m.frob.equals(GroupHom::identity(m.group)));
    }
    SUBCASE("swap inertia in rank two leaves a free line") {
        GaloisLattice l{2, {mat(2, 2, {0, 1, 1, 0})}, IntMatrix::identity(2), 1024};
        FrobModule m = component_group(l);
        CHECK(m.group == FgAbGroup::free_of_rank(1));
    }
    SUBCASE("Frobenius must normalize inertia") {
        // inertia generated by diag(-1, 1); conjugation by the shear does not
        // preserve the group
        GaloisLattice l{2, {mat(2, 2, {-1, 0, 0, 1})}, mat(2, 2, {1, 1, 0, 1}), 1024};
        CHECK_THROWS_AS(component_group(l), domain_error);
    }
    SUBCASE("rotation inertia of order four knocks the rank down to torsion") {
        GaloisLattice l{2, {mat(2, 2, {0, -1, 1, 0})}, IntMatrix::identity(2), 1024};
        FrobModule m = component_group(l);
        // coinvariants of the rotation: quotient by (F-1) lattice of index 2
        CHECK(m.group == FgAbGroup{{2}});
    }
}

TEST_CASE("kernel and automorphism structure of torus models") {
    SUBCASE("split rank two: divisible kernel from the free square") {
        CHECK(torus_kernel(split(2)) == DualStructure{1, {}});
        CHECK(torus_aut(split(2)) == DualStructure{2, {}});
    }
    SUBCASE("split rank one: no square at all") {
        CHECK(torus_kernel(split(1)).is_trivial());
        CHECK(torus_aut(split(1)) == DualStructure{1, {}});
    }
    SUBCASE("norm one torus: Frobenius acts by minus one") {
        GaloisLattice l{1, {}, mat(1, 1, {-1}), 1024};
        CHECK(torus_kernel(l).is_trivial());
        CHECK(torus_aut(l) == DualStructure{0, {2}});
    }
}

TEST_CASE("truncated unit groups by element order statistics") {
    SUBCASE("p-adic towers") {
        CHECK(truncated_units(RingSpec{"p-adic", 3, 1, 0}) == FgAbGroup{{2}});
        CHECK(truncated_units(RingSpec{"p-adic", 3, 1, 1}) == FgAbGroup{{6}});
        CHECK(truncated_units(RingSpec{"p-adic", 3, 1, 2}) == FgAbGroup{{18}});
        CHECK(truncated_units(RingSpec{"p-adic", 5, 1, 1}) == FgAbGroup{{20}});
        // the prime 2 is the classical exception: Z/2 x Z/2 at level 2
        CHECK(truncated_units(RingSpec{"p-adic", 2, 1, 1}) == FgAbGroup{{2}});
        CHECK(truncated_units(RingSpec{"p-adic", 2, 1, 2}) == FgAbGroup{{2, 2}});
        CHECK(truncated_units(RingSpec{"p-adic", 2, 1, 3}) == FgAbGroup{{2, 4}});
    }
    SUBCASE("laurent towers") {
        CHECK(truncated_units(RingSpec{"laurent", 2, 1, 0}) == FgAbGroup::trivial());
        CHECK(truncated_units(RingSpec{"laurent", 2, 1, 1}) == FgAbGroup{{2}});
        CHECK(truncated_units(RingSpec{"laurent", 2, 1, 2}) == FgAbGroup{{4}});
        CHECK(truncated_units(RingSpec{"laurent", 2, 1, 3}) == FgAbGroup{{2, 4}});
        CHECK(truncated_units(RingSpec{"laurent", 3, 1, 1}) == FgAbGroup{{6}});
        // residue field F_4 = F_2[u]: one-units are elementary abelian at level 1
        CHECK(truncated_units(RingSpec{"laurent", 2, 2, 0}) == FgAbGroup{{3}});
        CHECK(truncated_units(RingSpec{"laurent", 2, 2, 1}) == FgAbGroup{{2, 6}});
    }
    SUBCASE("bad specs are rejected") {
        CHECK_THROWS_AS(truncated_units(RingSpec{"p-adic", 4, 1, 1}), domain_error);
        CHECK_THROWS_AS(truncated_units(RingSpec{"other", 3, 1, 1}), domain_error);
        CHECK_THROWS_AS(truncated_units(RingSpec{"p-adic", 3, 1, -1}), domain_error);
        // unit count beyond the cap
        CHECK_THROWS_AS(truncated_units(RingSpec{"p-adic", 3, 1, 10}, 100), domain_error);
    }
}

TEST_CASE("quasicharacter counts for split tori") {
    SUBCASE("rank two over the level two laurent ring") {
        QuasicharCount c = quasicharacter_count(split(2), RingSpec{"laurent", 2, 1, 2});
        CHECK(c.order == 16);
        CHECK(c.factors == std::vector<Int>{4, 4});
    }
    SUBCASE("rank one over the level one p-adic ring") {
        QuasicharCount c = quasicharacter_count(split(1), RingSpec{"p-adic", 3, 1, 1});
        CHECK(c.order == 6);
        CHECK(c.factors == std::vector<Int>{6});
    }
    SUBCASE("non-split data is refused") {
        GaloisLattice ram{1, {mat(1, 1, {-1})}, IntMatrix::identity(1), 1024};
        CHECK_THROWS_AS(quasicharacter_count(ram, RingSpec{"p-adic", 3, 1, 1}), domain_error);
        GaloisLattice tw{1, {}, mat(1, 1, {-1}), 1024};
        CHECK_THROWS_AS(quasicharacter_count(tw, RingSpec{"p-adic", 3, 1, 1}), domain_error);
    }
}

TEST_CASE("unit towers are compatible across levels") {
    SUBCASE("p-adic level one into level two") {
        LevelCheck c = level_system_check(RingSpec{"p-adic", 3, 1, 1}, 2);
        CHECK(c.low_order == 6);
        CHECK(c.high_order == 18);
        CHECK(c.surjective);
        CHECK(c.kernel_order == 3);
        CHECK(c.expected_kernel == 3);
        CHECK(c.dual_embeds);
        CHECK(c.ok());
    }
    SUBCASE("laurent level one into level three") {
        LevelCheck c = level_system_check(RingSpec{"laurent", 2, 1, 1}, 3);
        CHECK(c.low_order == 2);
        CHECK(c.high_order == 8);
        CHECK(c.kernel_order == 4);
        CHECK(c.ok());
    }
    SUBCASE("level must not decrease") {
        CHECK_THROWS_AS(level_system_check(RingSpec{"p-adic", 3, 1, 2}, 1), domain_error);
    }
}
