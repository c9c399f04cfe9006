#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linefield/blowup.hpp"
#include "linefield/classifier.hpp"
#include "linefield/fields.hpp"
#include "linefield/index.hpp"

namespace linefield {

enum class Termination { Boundary, Singularity, StepLimit };

const char* to_string(Termination t);

struct Streamline {
    std::vector<Vec2> points;
    Termination termination = Termination::StepLimit;
    double arc_length = 0.0;
    bool is_skeleton = false;
    double tag_theta = 0.0;  // skeleton curves: seeding fixed-point direction
    Stability tag_stability = Stability::Marginal;
};

// Fourth-order fixed-step integration of the unit direction field of the
// bisector, with the sign at every evaluation chosen to align with the
// previous direction (orientation continuation across the mod-pi ambiguity).
// Without `initial_dir` the full leaf through p0 is traced (both senses);
// with it, only the selected sense. Stops on domain exit, singularity
// proximity (either field g-smaller than 1e-6 * scale), or max_len.
Streamline integrate_streamline(const ProtoLineField& L, Vec2 p0, double step,
                                double max_len,
                                std::optional<Vec2> initial_dir = std::nullopt);

// Everything the toolkit knows about one singular point.
struct SingularityReport {
    Vec2 location;
    bool x_vanishes = false, y_vanishes = false;
    bool degenerate = false;
    std::string note;  // set when degenerate explains why
    double det_jacobian = 0.0;
    ZeroType zero_type = ZeroType::Degenerate;
    int vf_index = 0;          // index of the vanishing field
    int twice_line_index = 0;  // twice the line-field index of the bisector
    double index_radius = 0.0;
    std::optional<Linearization> lin;
    std::optional<Classification> classification;
};

// find_zeros -> hyperbolicity -> linearize -> classify -> winding indices.
// Classification failures downgrade the report to degenerate instead of
// propagating (the portrait shows the point either way).
SingularityReport analyze_singularity(const ProtoLineField& L, Vec2 p, double radius);

// All singularities of L inside the box, analyzed with a winding radius of
// 0.4 times the smallest pairwise gap.
std::vector<SingularityReport> analyze_all(const ProtoLineField& L, const Domain& box);

// One separatrix streamline per fixed point, seeded at
// p + S (r0 cos t0, r0 sin t0) and integrated outward.
std::vector<Streamline> skeleton(const ProtoLineField& L, const SingularityReport& rep,
                                 double r0, double step, double max_len);

struct Portrait {
    std::vector<Streamline> streamlines;  // skeleton curves first
    std::vector<SingularityReport> singularities;
    Domain box;
};

struct PortraitOptions {
    int seed_grid = 20;
    double step = 2e-3;
    double max_len = 8.0;
    double skeleton_r0 = 1e-3;
};

// Finds and classifies all singularities, builds the skeleton first, then
// fills with streamlines from seed cells not already visited by a curve.
Portrait make_portrait(const ProtoLineField& L, const Domain& box,
                       const PortraitOptions& opt = {});

}  // namespace linefield
