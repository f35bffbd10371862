#pragma once

/// @file decoder.hpp
/// @brief Permutation-to-schedule decoding with feed switching.
///
/// Tasks are taken in permutation order. Each one scans the free pieces of
/// the visible windows in chronological order and takes the first piece that
/// admits it: directly, or by running past the window's end on the feeding
/// window bound to it. A placement trims the pieces it consumes. Antenna,
/// satellite and station occupation is tracked in timelines so that the
/// alpha/gamma separations and exclusivity rules hold for every output.

#include <optional>
#include <stdexcept>
#include <utility>
#include <span>
#include <vector>

#include "sgnp/model.hpp"

namespace sgnp {

/// For each visible window id, the feeding window bound to it (if any): same
/// satellite antenna, FVTW.end > VTW.end and overlap VTW.end - FVTW.start of
/// at least beta. Among candidates the largest FVTW.end wins, then smallest id.
std::vector<std::optional<WindowId>> associate_feed_windows(const Instance& instance);

/// Free part of a visible window.
struct FreePiece {
    Time start = 0;
    Time end = 0;
    WindowId window = 0;

    Duration length() const noexcept { return end - start; }
    bool operator==(const FreePiece&) const = default;
};

/// Precomputed, immutable per-instance data shared by every decode.
class DecoderContext {
  public:
    explicit DecoderContext(const Instance& instance);

    const Instance& instance() const noexcept { return *instance_; }
    const std::vector<std::optional<WindowId>>& association() const noexcept { return association_; }
    const std::vector<FreePiece>& initial_pieces() const noexcept { return initial_pieces_; }
    Duration longest_window() const noexcept { return longest_window_; }

    // Flat timeline slots.
    std::size_t resource_count() const noexcept { return gaps_.size(); }
    Duration gap(std::size_t resource) const noexcept { return gaps_[resource]; }
    std::size_t sat_antenna_slot(const AntennaRef& r) const { return index_.satellite_antenna(r); }
    std::size_t ground_antenna_slot(const AntennaRef& r) const {
        return index_.satellite_antenna_count() + index_.ground_antenna(r);
    }
    std::size_t satellite_slot(std::int32_t sat) const {
        return index_.satellite_antenna_count() + index_.ground_antenna_count() + static_cast<std::size_t>(sat);
    }
    std::size_t station_slot(std::int32_t station) const {
        return index_.satellite_antenna_count() + index_.ground_antenna_count() + instance_->satellites.size() +
               static_cast<std::size_t>(station);
    }

  private:
    const Instance* instance_;
    ResourceIndex index_;
    std::vector<std::optional<WindowId>> association_;
    std::vector<FreePiece> initial_pieces_;
    std::vector<Duration> gaps_;
    Duration longest_window_ = 0;
};

enum class PlacementMode { direct, feed_switch };

/// Mutable pool of free pieces plus resource timelines. Copyable, so search
/// procedures can branch on it.
class DecodeState {
  public:
    explicit DecodeState(const DecoderContext& context);

    const std::vector<FreePiece>& pieces() const noexcept { return pieces_; }
    /// Start of the still-free tail of a feeding window.
    Time feed_free_from(WindowId fvtw) const noexcept { return feed_free_from_[static_cast<std::size_t>(fvtw)]; }

    /// Index range [first, last) of pieces that can overlap [est, let].
    std::pair<std::size_t, std::size_t> candidate_range(const Task& task) const;

    /// Earliest feasible placement of the task in one piece, or nullopt.
    std::optional<Placement> try_place(const Task& task, std::size_t piece, PlacementMode mode) const;

    /// Records a placement produced by try_place on the same piece index.
    void commit(const Placement& placement, std::size_t piece);

    /// Total free time across visible-window pieces and feeding tails.
    Duration free_time() const noexcept;

  private:
    using Timeline = std::vector<BusyInterval>;

    // End + gap of the first interval on the resource that clashes with
    // `busy`, or nullopt if the resource is free for it.
    std::optional<Time> blocked_until(std::size_t resource, const BusyInterval& busy) const;
    void occupy(std::size_t resource, const BusyInterval& busy);
    void insert_piece(const FreePiece& piece);

    const DecoderContext* ctx_;
    std::vector<FreePiece> pieces_;
    std::vector<Time> feed_free_from_;
    std::vector<Timeline> timelines_;
};

class NotAPermutation : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Decodes a permutation of all task ids. Throws NotAPermutation otherwise.
Schedule decode(const DecoderContext& context, std::span<const TaskId> permutation);
Schedule decode(const Instance& instance, std::span<const TaskId> permutation);

bool is_permutation_of_tasks(std::span<const TaskId> permutation, std::size_t task_count);

} // namespace sgnp
