// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_EVENT_QUEUE_HPP
#define FLOODSHARD_EVENT_QUEUE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace floodshard {

using TimeMs = int64_t;

// Deterministic discrete-event queue. Events fire in (time, seq) order;
// the sequence number breaks every tie, so two runs over the same inputs
// produce the same trace. Strictly single-threaded.
template <typename Payload>
class EventQueue {
public:
    struct Event {
        TimeMs at;
        uint64_t seq;
        Payload payload;
    };

    void schedule(TimeMs at, Payload payload) {
        if (at < now_) throw std::logic_error("event scheduled into the past");
        heap_.push_back(Event{at, next_seq_++, std::move(payload)});
        std::push_heap(heap_.begin(), heap_.end(), Later{});
        ++scheduled_;
    }

    // Next event with fire time <= t_end, advancing the clock to it.
    std::optional<Event> pop_until(TimeMs t_end) {
        if (heap_.empty() || heap_.front().at > t_end) return std::nullopt;
        std::pop_heap(heap_.begin(), heap_.end(), Later{});
        Event ev = std::move(heap_.back());
        heap_.pop_back();
        now_ = ev.at;
        ++processed_;
        return ev;
    }

    TimeMs now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    size_t pending() const { return heap_.size(); }
    uint64_t scheduled_count() const { return scheduled_; }
    uint64_t processed_count() const { return processed_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::vector<Event> heap_;
    TimeMs now_ = 0;
    uint64_t next_seq_ = 0;
    uint64_t scheduled_ = 0;
    uint64_t processed_ = 0;
};

} // namespace floodshard

#endif // FLOODSHARD_EVENT_QUEUE_HPP
