#include "sgnp/decoder.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace sgnp {

std::vector<std::optional<WindowId>> associate_feed_windows(const Instance& inst) {
    std::vector<std::optional<WindowId>> bound(inst.windows.size());
    for (const auto& w : inst.windows) {
        std::optional<WindowId> best;
        for (const auto& f : inst.feeding_windows) {
            if (f.satellite_antenna != w.satellite_antenna) continue;
            if (f.end <= w.end || feed_overlap(w, f) < inst.timing.beta) continue;
            if (!best) {
                best = f.id;
                continue;
            }
            const auto& cur = inst.feeding_windows[static_cast<std::size_t>(*best)];
            if (f.end > cur.end || (f.end == cur.end && f.id < cur.id)) best = f.id;
        }
        bound[static_cast<std::size_t>(w.id)] = best;
    }
    return bound;
}

namespace {

bool piece_less(const FreePiece& a, const FreePiece& b) noexcept {
    return std::tie(a.start, a.window) < std::tie(b.start, b.window);
}

} // namespace

DecoderContext::DecoderContext(const Instance& instance)
    : instance_(&instance), index_(instance), association_(associate_feed_windows(instance)) {
    initial_pieces_.reserve(instance.windows.size());
    for (const auto& w : instance.windows) {
        initial_pieces_.push_back({w.start, w.end, w.id});
        longest_window_ = std::max(longest_window_, w.length());
    }
    std::sort(initial_pieces_.begin(), initial_pieces_.end(), piece_less);

    gaps_.assign(index_.satellite_antenna_count(), instance.timing.alpha);
    gaps_.insert(gaps_.end(), index_.ground_antenna_count(), instance.timing.gamma);
    gaps_.insert(gaps_.end(), instance.satellites.size() + instance.stations.size(), Duration{0});
}

DecodeState::DecodeState(const DecoderContext& context)
    : ctx_(&context), pieces_(context.initial_pieces()), timelines_(context.resource_count()) {
    const auto& feeds = context.instance().feeding_windows;
    feed_free_from_.reserve(feeds.size());
    for (const auto& f : feeds) feed_free_from_.push_back(f.start);
}

std::pair<std::size_t, std::size_t> DecodeState::candidate_range(const Task& task) const {
    // A piece is never longer than its window, so pieces starting before
    // est - longest_window cannot reach est.
    const Time from = task.est - ctx_->longest_window();
    auto first = std::lower_bound(pieces_.begin(), pieces_.end(), from,
                                  [](const FreePiece& p, Time t) { return p.start < t; });
    auto last = std::lower_bound(first, pieces_.end(), task.let,
                                 [](const FreePiece& p, Time t) { return p.start < t; });
    return {static_cast<std::size_t>(first - pieces_.begin()), static_cast<std::size_t>(last - pieces_.begin())};
}

std::optional<Time> DecodeState::blocked_until(std::size_t resource, const BusyInterval& busy) const {
    const Timeline& line = timelines_[resource];
    const Duration gap = ctx_->gap(resource);
    // Intervals on a timeline are disjoint, so ends are sorted like starts.
    auto it = std::upper_bound(line.begin(), line.end(), busy.start,
                               [gap](Time t, const BusyInterval& b) { return t < b.end + gap; });
    if (it == line.end()) return std::nullopt;
    if (it->start < busy.end + gap) return it->end + gap;
    return std::nullopt;
}

void DecodeState::occupy(std::size_t resource, const BusyInterval& busy) {
    Timeline& line = timelines_[resource];
    auto it = std::lower_bound(line.begin(), line.end(), busy, [](const BusyInterval& a, const BusyInterval& b) {
        return std::tie(a.start, a.end) < std::tie(b.start, b.end);
    });
    line.insert(it, busy);
}

void DecodeState::insert_piece(const FreePiece& piece) {
    if (piece.length() <= 0) return;
    pieces_.insert(std::upper_bound(pieces_.begin(), pieces_.end(), piece, piece_less), piece);
}

std::optional<Placement> DecodeState::try_place(const Task& task, std::size_t piece_index, PlacementMode mode) const {
    const Instance& inst = ctx_->instance();
    const FreePiece& piece = pieces_[piece_index];
    const VisibleWindow& w = inst.windows[static_cast<std::size_t>(piece.window)];
    const Duration d = task.duration;
    const Time aest = std::max(task.est, piece.start);
    const Time alet = std::min(task.let, piece.end);

    const std::size_t sat_ant = ctx_->sat_antenna_slot(w.satellite_antenna);
    const std::size_t sat = ctx_->satellite_slot(w.satellite_antenna.owner);
    const std::size_t gnd_ant = ctx_->ground_antenna_slot(w.ground_antenna);
    const std::size_t gnd = ctx_->station_slot(w.ground_antenna.owner);

    if (mode == PlacementMode::direct) {
        if (alet - aest < d) return std::nullopt;
        for (Time st = aest; st + d <= alet;) {
            const BusyInterval span{st, st + d};
            Time next = st;
            for (std::size_t r : {sat_ant, sat, gnd_ant, gnd})
                if (auto until = blocked_until(r, span)) next = std::max(next, *until);
            if (next == st) return Placement{task.id, w.id, std::nullopt, st, st + d};
            st = next;
        }
        return std::nullopt;
    }

    // Feed switch: run from st on the visible window up to its end, then
    // continue on the bound feeding window until st + d.
    const auto& bound = ctx_->association()[static_cast<std::size_t>(w.id)];
    if (!bound || piece.end != w.end) return std::nullopt;
    const FeedingWindow& f = inst.feeding_windows[static_cast<std::size_t>(*bound)];
    const Time free_from = feed_free_from_[static_cast<std::size_t>(f.id)];

    Time lo = std::max(aest, w.end - d);
    if (free_from > f.start) lo = std::max(lo, free_from);
    const Time hi = std::min(w.end - 1, std::min(task.let, f.end) - d);

    const std::size_t feed_ant = ctx_->ground_antenna_slot(f.ground_antenna);
    const std::size_t feed_station = ctx_->station_slot(f.ground_antenna.owner);
    const bool shared_station = f.ground_antenna.owner == w.ground_antenna.owner;

    for (Time st = lo; st <= hi;) {
        const BusyInterval span{st, st + d};
        const BusyInterval ground{st, w.end};
        const BusyInterval feed{std::max(st, f.start), st + d};
        if (shared_station && !compatible(ground, feed, 0)) return std::nullopt;
        Time next = st;
        for (std::size_t r : {sat_ant, sat})
            if (auto until = blocked_until(r, span)) next = std::max(next, *until);
        for (std::size_t r : {gnd_ant, gnd})
            if (auto until = blocked_until(r, ground)) next = std::max(next, *until);
        for (std::size_t r : {feed_ant, feed_station})
            if (auto until = blocked_until(r, feed)) next = std::max(next, *until);
        if (next == st) return Placement{task.id, w.id, f.id, st, st + d};
        st = next;
    }
    return std::nullopt;
}

void DecodeState::commit(const Placement& p, std::size_t piece_index) {
    const Instance& inst = ctx_->instance();
    const FreePiece piece = pieces_[piece_index];
    const VisibleWindow& w = inst.windows[static_cast<std::size_t>(piece.window)];
    pieces_.erase(pieces_.begin() + static_cast<std::ptrdiff_t>(piece_index));

    const BusyInterval span{p.start, p.end};
    occupy(ctx_->sat_antenna_slot(w.satellite_antenna), span);
    occupy(ctx_->satellite_slot(w.satellite_antenna.owner), span);

    if (!p.feed_switch()) {
        occupy(ctx_->ground_antenna_slot(w.ground_antenna), span);
        occupy(ctx_->station_slot(w.ground_antenna.owner), span);
        insert_piece({piece.start, p.start, piece.window});
        insert_piece({p.end, piece.end, piece.window});
        return;
    }

    const FeedingWindow& f = inst.feeding_windows[static_cast<std::size_t>(*p.feeding_window)];
    const BusyInterval ground{p.start, w.end};
    const BusyInterval feed{std::max(p.start, f.start), p.end};
    occupy(ctx_->ground_antenna_slot(w.ground_antenna), ground);
    occupy(ctx_->station_slot(w.ground_antenna.owner), ground);
    occupy(ctx_->ground_antenna_slot(f.ground_antenna), feed);
    occupy(ctx_->station_slot(f.ground_antenna.owner), feed);
    insert_piece({piece.start, p.start, piece.window});
    feed_free_from_[static_cast<std::size_t>(f.id)] = p.end;
}

Duration DecodeState::free_time() const noexcept {
    Duration total = 0;
    for (const auto& p : pieces_) total += p.length();
    const auto& feeds = ctx_->instance().feeding_windows;
    for (std::size_t i = 0; i < feeds.size(); ++i) total += std::max<Duration>(0, feeds[i].end - feed_free_from_[i]);
    return total;
}

bool is_permutation_of_tasks(std::span<const TaskId> permutation, std::size_t task_count) {
    if (permutation.size() != task_count) return false;
    std::vector<char> seen(task_count, 0);
    for (TaskId id : permutation) {
        if (id < 0 || static_cast<std::size_t>(id) >= task_count || seen[static_cast<std::size_t>(id)]) return false;
        seen[static_cast<std::size_t>(id)] = 1;
    }
    return true;
}

Schedule decode(const DecoderContext& ctx, std::span<const TaskId> permutation) {
    const Instance& inst = ctx.instance();
    if (!is_permutation_of_tasks(permutation, inst.tasks.size()))
        throw NotAPermutation("decode: input is not a permutation of the " + std::to_string(inst.tasks.size()) +
                              " task ids");
    DecodeState state(ctx);
    Schedule out;
    out.placements.reserve(permutation.size());
    for (TaskId id : permutation) {
        const Task& task = inst.tasks[static_cast<std::size_t>(id)];
        const auto [first, last] = state.candidate_range(task);
        bool placed = false;
        for (std::size_t i = first; i < last && !placed; ++i) {
            auto p = state.try_place(task, i, PlacementMode::direct);
            if (!p) p = state.try_place(task, i, PlacementMode::feed_switch);
            if (p) {
                state.commit(*p, i);
                out.placements.push_back(*p);
                placed = true;
            }
        }
        if (!placed) out.unscheduled.push_back(id);
    }
    return out;
}

Schedule decode(const Instance& instance, std::span<const TaskId> permutation) {
    const DecoderContext ctx(instance);
    return decode(ctx, permutation);
}

} // namespace sgnp
