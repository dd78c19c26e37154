#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rqbm/contraction.hpp"
#include "rqbm/spaces.hpp"

namespace rqbm {

/// A worked example: the space plus the map and comparison functions that
/// go with it. The space is always built by parsing its JSON form.
struct InstanceBundle {
    std::string name;
    std::string description;
    Space space;
    std::optional<std::string> map;
    std::optional<std::string> theta;
    std::optional<std::string> phi;
    std::optional<double> r;
    std::optional<double> s;
    std::optional<double> expected_fixed_point;
    std::string note;
};

/// A = {1/2, ..., 1/7} with the asymmetric table, B = [1, 2] as a b_grid
/// point grid plus continuum; claimed s = 3.
InstanceBundle build_example_2_3(std::size_t b_grid = 11);

enum class SqrtVariant { sqrt, fourth_root };

/// Piecewise-square space on [1, 2], s = 2, theta = exp(sqrt(t)), r = 1/2.
InstanceBundle build_example_sqrt(SqrtVariant variant);

/// A = {1/3, 1/4, 1/5, 1/6} with its table, B = [1/2, 3/2] as a b_grid point
/// grid plus continuum; T = 1 on A and (sqrt(a)+3)/4 on B.
InstanceBundle build_example_final(std::size_t b_grid = 11);

std::vector<std::string> instance_names();
/// b_grid applies to the mixed examples only.
InstanceBundle build_instance(std::string_view name, std::optional<std::size_t> b_grid = std::nullopt);

enum class RandomProfile { metric, quasi, adversarial };
std::optional<RandomProfile> parse_profile(std::string_view name);
std::string_view to_string(RandomProfile p);

/// Coefficient at which the profile's spaces are RQB by construction.
double profile_s(RandomProfile p);

/// n seeded points of the unit square; random_space draws these first.
std::vector<std::pair<double, double>> random_plane_points(std::size_t n, std::uint64_t seed);

/// Labels p0..p{n-1}, value = first coordinate, full override table.
FiniteSpace random_space(std::size_t n, std::uint64_t seed, RandomProfile profile);

/// Table map for random_space(n, seed, *): each point moves a seeded
/// fraction of the way toward a seeded centre and snaps to the nearest
/// point of the plane sample.
SelfMap affine_toward_map(const FiniteSpace& space, std::size_t n, std::uint64_t seed);

enum class Perturbation { break_identity, break_quadrilateral };
std::optional<Perturbation> parse_perturbation(std::string_view name);
std::string_view to_string(Perturbation p);

/// break_identity zeroes one positive off-diagonal distance. break_quadrilateral
/// raises one d(x,y) above s times its shortest three-hop detour, s being
/// the claimed coefficient or 1.
FiniteSpace perturb(const FiniteSpace& space, Perturbation kind, std::uint64_t seed);

} // namespace rqbm
