#include "waveinv/control_space.hpp"

#include "support/oracles.hpp"
#include "waveinv/prox.hpp"
#include "waveinv/rng.hpp"

#include <doctest.h>

using namespace waveinv;

TEST_CASE("control dofs have full support inside the closed control band") {
    const Mesh m = build_rect_mesh({-1, 1, -1, 2}, 7, 10); // dy = 1/3
    const ControlSpace cs(m, {-1, 1, 0, 1});
    for (int k = 0; k < cs.dof_count(); ++k) {
        const auto& p = m.nodes[cs.node_ids()[k]];
        // one row of margin inside the band in y, full width in x
        CHECK(p.y() >= 0 + m.dy() - 1e-12);
        CHECK(p.y() <= 1 - m.dy() + 1e-12);
    }
    // nodes on the band interface are excluded, interior rows of the band kept
    CHECK(cs.dof_count() == 7 * 2);
    CHECK(cs.tri_count() == 2 * 6 * 3);
}

TEST_CASE("lumped weights are positive and integrate the control hats") {
    const Mesh m = build_rect_mesh({-1, 1, -1, 2}, 7, 10);
    const ControlSpace cs(m, {-1, 1, 0, 1});
    CHECK(cs.lumped().minCoeff() > 0);
    // sum d_i = integral of the sum of the control hats = that P1 mass
    Vec ind = Vec::Zero(m.node_count());
    for (int id : cs.node_ids())
        ind[id] = 1.0;
    CHECK(cs.lumped().sum() == doctest::Approx(oracle::integrate_p1(m, ind)).epsilon(1e-13));
}

TEST_CASE("gradient operator") {
    // control everywhere, so P1 fields are represented exactly
    const Mesh m = build_rect_mesh({0, 2, 0, 1}, 6, 5);
    const ControlSpace cs(m, m.domain);
    CHECK(cs.dof_count() == m.node_count());
    CHECK(cs.tri_count() == m.tri_count());
    const SpMat Ah = assemble_gradient_op(cs);

    SUBCASE("constants are in the kernel") {
        const Vec g = Ah * Vec::Ones(cs.dof_count());
        CHECK(g.lpNorm<Eigen::Infinity>() < 1e-13);
    }
    SUBCASE("linear x1 gives (|K|, 0) per triangle and TV = area") {
        Vec u(cs.dof_count());
        for (int k = 0; k < cs.dof_count(); ++k)
            u[k] = m.nodes[cs.node_ids()[k]].x();
        const Vec g = Ah * u;
        for (int k = 0; k < cs.tri_count(); ++k) {
            CHECK(g[2 * k] == doctest::Approx(cs.tri_data()[k].area).epsilon(1e-13));
            CHECK(std::abs(g[2 * k + 1]) < 1e-13);
        }
        CHECK(tv_value(Ah, u) == doctest::Approx(m.domain.area()).epsilon(1e-13));
    }
    SUBCASE("TV from the operator equals the per-element closed form") {
        Rng rng(5);
        Vec u(cs.dof_count());
        for (int i = 0; i < u.size(); ++i)
            u[i] = rng.uniform01();
        double exact = 0;
        for (const auto& td : cs.tri_data()) {
            Eigen::Vector2d grad = Eigen::Vector2d::Zero();
            for (int a = 0; a < 3; ++a)
                grad += td.grads.col(a) * u[cs.dof_of_node(td.verts[a])];
            exact += td.area * grad.norm();
        }
        CHECK(tv_value(Ah, u) == doctest::Approx(exact).epsilon(1e-14));
        // positive homogeneity
        CHECK(tv_value(Ah, -2.5 * u) == doctest::Approx(2.5 * tv_value(Ah, u)).epsilon(1e-13));
    }
}

TEST_CASE("zero extension and restriction round trip") {
    const Mesh m = build_rect_mesh({0, 1, 0, 1}, 6, 6);
    const ControlSpace cs(m, {0, 1, 0, 0.6});
    Rng rng(17);
    Vec u(cs.dof_count());
    for (int i = 0; i < u.size(); ++i)
        u[i] = rng.uniform01();
    const Vec ext = cs.extend(u, 2.0);
    CHECK((cs.restrict_nodal(ext) - (u.array() + 2.0).matrix()).lpNorm<Eigen::Infinity>() == 0);
    // extension is the offset away from the control dofs
    int touched = 0;
    for (int n = 0; n < m.node_count(); ++n)
        if (cs.dof_of_node(n) < 0)
            CHECK(ext[n] == 2.0);
        else
            ++touched;
    CHECK(touched == cs.dof_count());
}
