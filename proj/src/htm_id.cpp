#include "htm/htm_id.hpp"

#include <bit>

#include "htm/errors.hpp"

namespace htm {

bool is_valid_id(HtmId id) {
    if (id < kMinHtmId) return false;
    int bits = std::bit_width(id);
    return (bits - 4) % 2 == 0;  // bits <= 64 always; level <= 30 follows
}

static void check_valid(HtmId id) {
    if (!is_valid_id(id))
        throw InvalidHtmIdError("invalid HtmID " + std::to_string(id));
}

int id_level(HtmId id) {
    check_valid(id);
    return (std::bit_width(id) - 4) / 2;
}

int id_depth(HtmId id) { return id_level(id) + 1; }

int id_face(HtmId id) {
    int level = id_level(id);
    return static_cast<int>((id >> (2 * level)) & 0x7u);
}

int id_digit(HtmId id, int level) {
    return static_cast<int>((id >> (2 * (id_level(id) - level))) & 0x3u);
}

HtmId id_parent(HtmId id) {
    if (id_level(id) == 0)
        throw InvalidHtmIdError("id " + std::to_string(id) + " is a face; it has no parent");
    return id >> 2;
}

std::string id_to_string(HtmId id) {
    int level = id_level(id);
    int face = id_face(id);
    std::string out;
    out.reserve(static_cast<std::size_t>(level) + 2);
    out += (face < 4) ? 'S' : 'N';
    out += static_cast<char>('0' + face % 4);
    for (int i = 1; i <= level; ++i) out += static_cast<char>('0' + id_digit(id, i));
    return out;
}

HtmId id_from_string(std::string_view s) {
    if (s.size() < 2)
        throw ParseError("trixel string too short: \"" + std::string(s) + "\"");
    if (s.size() > static_cast<std::size_t>(kMaxDepth) + 1)
        throw ParseError("trixel string longer than depth 31: \"" + std::string(s) + "\"");
    char hemi = s[0];
    HtmId id;
    if (hemi == 'S' || hemi == 's') id = 2;
    else if (hemi == 'N' || hemi == 'n') id = 3;
    else throw ParseError(std::string("trixel string must start with N or S, got '") + hemi + "'");
    for (std::size_t i = 1; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '3')
            throw ParseError(std::string("trixel digit must be 0..3, got '") + c + "'");
        id = (id << 2) | static_cast<HtmId>(c - '0');
    }
    return id;
}

std::pair<HtmId, HtmId> leaf_range(HtmId id, int leaf_depth) {
    if (leaf_depth < 1 || leaf_depth > kMaxDepth)
        throw DepthExceededError("leaf depth " + std::to_string(leaf_depth) +
                                 " outside [1, 31]");
    int d = id_depth(id);
    if (d > leaf_depth)
        throw DepthExceededError("id at depth " + std::to_string(d) +
                                 " is below leaf depth " + std::to_string(leaf_depth));
    int shift = 2 * (leaf_depth - d);
    return {id << shift, ((id + 1) << shift) - 1};
}

}  // namespace htm
