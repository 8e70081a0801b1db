#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace htm {

// A trixel key. Bit layout: a single leading 1 bit, a 3-bit face number
// [0..7], then one 2-bit child digit per subdivision level. The smallest
// valid id is 8 (face 0 at level 0); level 30 (depth 31) exhausts the
// 64 bits.
using HtmId = std::uint64_t;

inline constexpr int kDefaultDepth = 21;
inline constexpr int kMaxDepth = 31;
inline constexpr HtmId kMinHtmId = 8;

bool is_valid_id(HtmId id);

/// Subdivision count below the octahedron face. Throws InvalidHtmIdError.
int id_level(HtmId id);

/// depth = level + 1.
int id_depth(HtmId id);

/// Face number 0..7 (0..3 southern, 4..7 northern).
int id_face(HtmId id);

/// Child digit (0..3) at 1-based level `level` (1 = first split).
int id_digit(HtmId id, int level);

/// Parent id, one level up. Level-0 ids have no parent.
HtmId id_parent(HtmId id);

/// "[N|S]" + depth digits, e.g. 8 -> "S0". Throws InvalidHtmIdError.
std::string id_to_string(HtmId id);

/// Inverse of id_to_string; accepts lower-case letters. Throws ParseError.
HtmId id_from_string(std::string_view s);

/// Closed interval of leaf-depth ids descending from `id`:
/// [id << 2k, ((id+1) << 2k) - 1] with k = leaf_depth - depth(id).
/// Throws DepthExceededError when depth(id) > leaf_depth or leaf_depth
/// is outside [1, 31].
std::pair<HtmId, HtmId> leaf_range(HtmId id, int leaf_depth);

}  // namespace htm
