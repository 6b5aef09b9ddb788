#pragma once

// Merkle-tree allowlist accumulator.
//
// Leaves are H(0x00 || item), inner nodes H(0x01 || left || right). A level
// with an odd node count promotes its last node unchanged to the next level,
// so a tree of N leaves has paths of at most ceil(log2 N) steps. Appends
// touch one path; removal rebuilds the tree from the remaining items.

#include <cstdint>
#include <map>
#include <vector>

#include "revoc/core/bytes.hpp"
#include "revoc/core/credential.hpp"

namespace revoc {

struct MerklePathStep {
    Digest sibling{};
    bool sibling_left = false;

    bool operator==(const MerklePathStep&) const = default;
};

struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<MerklePathStep> steps;

    Bytes serialize() const;
    static MerklePath parse(ByteView data);
    bool operator==(const MerklePath&) const = default;
};

Digest merkle_leaf_hash(ByteView item);
Digest merkle_node_hash(const Digest& left, const Digest& right);

class MerkleAccumulator {
public:
    MerkleAccumulator() = default;

    /// Builds from scratch. Throws AlreadyMember on duplicates.
    static MerkleAccumulator build(const std::vector<Bytes>& items, LogicalTime epoch = {});

    /// Appends an item, updating only the affected path. Throws AlreadyMember.
    std::uint64_t append(ByteView item);
    /// Drops an item and rebuilds. Throws NotPresent.
    void remove(ByteView item);

    bool contains(ByteView item) const { return index_.contains(Bytes(item.begin(), item.end())); }
    std::size_t leaf_count() const { return items_.size(); }
    const std::vector<Bytes>& items() const { return items_; }

    /// Root of the empty tree is H(0x02).
    Digest root() const;

    /// Throws NotPresent.
    MerklePath prove(ByteView item) const;

    LogicalTime epoch() const { return epoch_; }
    void set_epoch(LogicalTime e) { epoch_ = e; }

private:
    void rebuild();

    std::vector<Bytes> items_;
    std::map<Bytes, std::uint64_t> index_;
    std::vector<std::vector<Digest>> levels_;
    LogicalTime epoch_;
};

bool merkle_verify(const Digest& root, ByteView item, const MerklePath& path);

/// Root recomputed from scratch without any incremental state.
Digest merkle_root_of(const std::vector<Bytes>& items);

}  // namespace revoc
