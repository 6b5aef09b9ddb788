#include "revoc/accumulators/merkle_accumulator.hpp"

#include <algorithm>
#include <array>

#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {
namespace {

constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kNodePrefix = 0x01;
constexpr std::uint8_t kEmptyPrefix = 0x02;

Digest empty_root() {
    const std::uint8_t prefix = kEmptyPrefix;
    return sha256(ByteView(&prefix, 1));
}

std::vector<Digest> next_level(const std::vector<Digest>& level) {
    std::vector<Digest> out;
    out.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
        out.push_back(i + 1 < level.size() ? merkle_node_hash(level[i], level[i + 1]) : level[i]);
    }
    return out;
}

}  // namespace

Digest merkle_leaf_hash(ByteView item) {
    Bytes in{kLeafPrefix};
    append(in, item);
    return sha256(in);
}

Digest merkle_node_hash(const Digest& left, const Digest& right) {
    std::array<std::uint8_t, 65> in{};
    in[0] = kNodePrefix;
    std::copy(left.begin(), left.end(), in.begin() + 1);
    std::copy(right.begin(), right.end(), in.begin() + 33);
    return sha256(in);
}

Bytes MerklePath::serialize() const {
    Writer w;
    w.tag('P').u64(leaf_index).u64(steps.size());
    for (const auto& s : steps) {
        const std::uint8_t side = s.sibling_left ? 1 : 0;
        w.raw(s.sibling).raw(ByteView(&side, 1));
    }
    return std::move(w).take();
}

MerklePath MerklePath::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('P');
    MerklePath path;
    path.leaf_index = r.u64();
    const auto count = r.u64();
    if (count > 64) {
        throw Error(ErrorCode::Malformed, "merkle path too long");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        MerklePathStep step;
        auto sib = r.raw(32);
        std::copy(sib.begin(), sib.end(), step.sibling.begin());
        auto side = r.raw(1)[0];
        if (side > 1) {
            throw Error(ErrorCode::Malformed, "bad merkle step side");
        }
        step.sibling_left = side == 1;
        path.steps.push_back(step);
    }
    r.expect_done();
    return path;
}

MerkleAccumulator MerkleAccumulator::build(const std::vector<Bytes>& items, LogicalTime epoch) {
    MerkleAccumulator acc;
    acc.epoch_ = epoch;
    for (const auto& item : items) {
        if (!acc.index_.emplace(item, acc.items_.size()).second) {
            throw Error(ErrorCode::AlreadyMember, "duplicate merkle leaf");
        }
        acc.items_.push_back(item);
    }
    acc.rebuild();
    return acc;
}

std::uint64_t MerkleAccumulator::append(ByteView item) {
    Bytes key(item.begin(), item.end());
    const std::uint64_t index = items_.size();
    if (!index_.emplace(key, index).second) {
        throw Error(ErrorCode::AlreadyMember, "item already in the tree");
    }
    items_.push_back(std::move(key));
    if (levels_.empty()) {
        levels_.emplace_back();
    }
    levels_[0].push_back(merkle_leaf_hash(item));
    // Only the last node of every level can change on append.
    for (std::size_t k = 0; levels_[k].size() > 1; ++k) {
        if (k + 1 == levels_.size()) {
            levels_.emplace_back();
        }
        const auto& level = levels_[k];
        auto& up = levels_[k + 1];
        const std::size_t last = (level.size() - 1) / 2;
        const std::size_t left = 2 * last;
        Digest node = left + 1 < level.size() ? merkle_node_hash(level[left], level[left + 1]) : level[left];
        if (up.size() == last) {
            up.push_back(node);
        } else {
            up[last] = node;
        }
    }
    return index;
}

void MerkleAccumulator::remove(ByteView item) {
    auto it = index_.find(Bytes(item.begin(), item.end()));
    if (it == index_.end()) {
        throw Error(ErrorCode::NotPresent, "item not in the tree");
    }
    items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(it->second));
    index_.clear();
    for (std::uint64_t i = 0; i < items_.size(); ++i) {
        index_.emplace(items_[i], i);
    }
    rebuild();
}

void MerkleAccumulator::rebuild() {
    levels_.clear();
    if (items_.empty()) {
        return;
    }
    std::vector<Digest> level;
    level.reserve(items_.size());
    for (const auto& item : items_) {
        level.push_back(merkle_leaf_hash(item));
    }
    levels_.push_back(std::move(level));
    while (levels_.back().size() > 1) {
        levels_.push_back(next_level(levels_.back()));
    }
}

Digest MerkleAccumulator::root() const {
    return levels_.empty() ? empty_root() : levels_.back().front();
}

MerklePath MerkleAccumulator::prove(ByteView item) const {
    auto it = index_.find(Bytes(item.begin(), item.end()));
    if (it == index_.end()) {
        throw Error(ErrorCode::NotPresent, "item not in the tree");
    }
    MerklePath path;
    path.leaf_index = it->second;
    std::size_t i = it->second;
    for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
        const std::size_t sibling = i ^ 1U;
        if (sibling < levels_[k].size()) {
            path.steps.push_back({levels_[k][sibling], sibling < i});
        }
        i /= 2;
    }
    return path;
}

bool merkle_verify(const Digest& root, ByteView item, const MerklePath& path) {
    Digest node = merkle_leaf_hash(item);
    for (const auto& step : path.steps) {
        node = step.sibling_left ? merkle_node_hash(step.sibling, node) : merkle_node_hash(node, step.sibling);
    }
    return node == root;
}

Digest merkle_root_of(const std::vector<Bytes>& items) {
    if (items.empty()) {
        return empty_root();
    }
    std::vector<Digest> level;
    for (const auto& item : items) {
        level.push_back(merkle_leaf_hash(item));
    }
    while (level.size() > 1) {
        level = next_level(level);
    }
    return level.front();
}

}  // namespace revoc
