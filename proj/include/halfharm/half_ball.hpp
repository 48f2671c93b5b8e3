#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "halfharm/blaschke.hpp"
#include "halfharm/nonlocal_energy.hpp"
#include "halfharm/vec3.hpp"

namespace halfharm {

struct Atom {
    cplx a;
    int d = 0;
};

struct AtomMeasure {
    std::vector<Atom> atoms;

    int total() const;
    // throws PreconditionViolation on coincident atoms or points outside the closed disc
    void validate() const;
};

enum class NodeKind { interior, hemisphere_fixed, flat_free, equator_fixed };

const char* node_kind_name(NodeKind k);

// Cubic lattice over the closed upper half ball. Lattice points sit at
// x1 = (i + 1/2) h, x2 = (j + 1/2) h, x3 = k h, so the origin is never a node.
// Cells meeting B_1^+ carry the fraction of their volume inside B_1.
struct HalfBallGrid {
    double h = 0.1;
    int n = 0;  // i, j in [-n, n), k in [0, n]
    std::vector<Vec3> pos;
    std::vector<NodeKind> kind;
    std::vector<std::array<int, 3>> ijk;
    std::vector<int> index;  // dense (i, j, k) -> node id or -1

    struct Cell {
        std::array<int, 8> corner;  // bit 0: +x, bit 1: +y, bit 2: +z
        double weight;
    };
    std::vector<Cell> cells;

    // edge coefficients per node and direction (+x, -x, +y, -y, +z, -z), -1 neighbour when absent
    std::vector<std::array<int, 6>> nbr;
    std::vector<std::array<double, 6>> coef;

    int node_at(int i, int j, int k) const;
    bool is_free(int id) const { return kind[id] == NodeKind::interior || kind[id] == NodeKind::flat_free; }
    std::size_t count(NodeKind k) const;
    std::size_t size() const { return pos.size(); }
};

std::shared_ptr<const HalfBallGrid> build_grid(double h);

// fraction of the cell [lo, lo + h]^3 inside the ball of radius r about 0
double cell_fraction(const Vec3& lo, double h, double r);

struct HalfBallField {
    std::shared_ptr<const HalfBallGrid> grid;
    std::vector<cplx> v;
    std::vector<char> flagged;  // flat nodes where a zero vector had to be projected

    static HalfBallField from_function(std::shared_ptr<const HalfBallGrid> g, const std::function<cplx(const Vec3&)>& f);
};

HalfBallField set_boundary_data(std::shared_ptr<const HalfBallGrid> grid, const BlaschkeProduct& B);

// nearest point on S^1, with 0 sent to (1, 0)
cplx project_circle(cplx v, bool* was_zero = nullptr);

double discrete_energy(const HalfBallField& f);
// energy of the cells weighted by their volume fraction inside B_r
double discrete_energy_ball(const HalfBallField& f, double r);

AtomMeasure flat_singularities(const HalfBallField& f);

struct SolverReport {
    int iterations = 0;
    std::vector<double> energy;  // initial value first, then one entry per symmetric sweep
    double final_energy = 0;
    bool converged = false;
    int flagged_nodes = 0;
    AtomMeasure atoms;
    bool atoms_resolved = true;  // false when flat_singularities asked for refinement
    std::string note;

    bool nonincreasing() const;
};

// symmetric Gauss-Seidel: exact minimisation per node, flat nodes minimised over S^1
SolverReport relax(HalfBallField& f, int max_iters = 4000, double tol = 1e-10);

MonotoneReport monotonicity_check(const HalfBallField& f, const std::vector<double>& radii, double rel_tol = 0.02);

// x3 = const slice: x1, x2, |v|, arg v, kind
void write_field_slice_csv(std::ostream& os, const HalfBallField& f, int k = 0);

}  // namespace halfharm
