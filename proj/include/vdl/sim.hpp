#pragma once

// Deterministic discrete-event kernel plus the timing model: virtual UART
// link, single-transaction I2C cost, and the cycle-based task-switch cost.
// All latencies are configuration, expressed in integer nanoseconds.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "vdl/common.hpp"

namespace vdl::sim {

using SimTime = std::uint64_t;  // nanoseconds since simulation start

enum class EventKind : std::uint8_t {
    SensorDrdy,  // a = sensor id
    I2cDone,     // a = sensor id
    UartTxDone,  // a = link id
    TaskWake,    // a = task id
    TimerFire,   // a = timer tag
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::SensorDrdy: return "SensorDrdy";
        case EventKind::I2cDone: return "I2cDone";
        case EventKind::UartTxDone: return "UartTxDone";
        case EventKind::TaskWake: return "TaskWake";
        case EventKind::TimerFire: return "TimerFire";
    }
    return "?";
}

struct SimEvent {
    SimTime at = 0;
    std::uint64_t seq = 0;  // insertion ordinal, ties broken by (at, seq)
    EventKind kind = EventKind::TimerFire;
    std::uint64_t a = 0;
    std::uint64_t b = 0;
};

enum class SimError { SchedulePastEvent };

struct TimingParams {
    std::uint64_t cpu_clock_hz = 160'000'000;
    std::uint64_t task_switch_cycles = 272;

    std::uint64_t i2c_read_ns = 112'000;

    std::uint64_t uart_baud = 1'000'000;
    std::uint64_t uart_bits_per_byte = 10;  // start + 8 data + stop
    bool uart_fifo_enabled = false;
    // uart_setup_ns < 0 derives the value from the FIFO flag
    // (enabled: 11 us, disabled: 5 us).
    std::int64_t uart_setup_ns = -1;

    // 1 = FSM-in-loop dispatch, 2 = two-stage task dispatch.
    std::uint32_t exti_dispatch_stages = 1;

    std::uint64_t exti_overhead_ns = 258;         // ISR entry cost on top of switches
    std::uint64_t serialize_ns = 2'375;           // sample encode + frame build span
    std::uint64_t uart_transition_ns = 2'542;     // stream-to-UART handoff base
    std::uint64_t uart_kick_ns = 1'000;           // busy time starting the TX
    std::uint64_t exti_return_overhead_ns = 600;  // stream-to-EXTI round trip base
    std::uint64_t logging_overhead_ns = 0;

    bool drdy_via_status_read = false;  // pre-optimization DRDY disambiguation
};

/// task_switch_cycles expressed in nanoseconds at the configured clock,
/// rounded to the nearest integer.
inline std::uint64_t task_switch_latency_ns(const TimingParams& p) {
    if (p.cpu_clock_hz == 0) {
        throw LogicError("task_switch_latency: cpu_clock_hz must be > 0");
    }
    return (p.task_switch_cycles * 1'000'000'000ULL + p.cpu_clock_hz / 2) / p.cpu_clock_hz;
}

inline std::uint64_t uart_byte_ns(const TimingParams& p) {
    return (p.uart_bits_per_byte * 1'000'000'000ULL + p.uart_baud / 2) / p.uart_baud;
}

inline std::uint64_t uart_setup_ns(const TimingParams& p) {
    if (p.uart_setup_ns >= 0) {
        return static_cast<std::uint64_t>(p.uart_setup_ns);
    }
    return p.uart_fifo_enabled ? 11'000 : 5'000;
}

/// EXTI-to-stream dispatch latency (trace interval P1).
inline std::uint64_t exti_dispatch_ns(const TimingParams& p) {
    return p.exti_dispatch_stages * task_switch_latency_ns(p) + p.exti_overhead_ns;
}

/// Stream-to-UART transition latency (trace interval P4).
inline std::uint64_t uart_transition_total_ns(const TimingParams& p) {
    return (p.exti_dispatch_stages - 1) * task_switch_latency_ns(p) + p.uart_transition_ns;
}

/// Stream-to-EXTI executor round trip (trace interval P6, two-stage only).
inline std::uint64_t exti_return_ns(const TimingParams& p) {
    if (p.exti_dispatch_stages < 2) {
        return 0;
    }
    return 2 * task_switch_latency_ns(p) + p.exti_return_overhead_ns;
}

/// Min-heap event queue with deterministic (at, seq) ordering. Capacity is
/// reserved up front so steady-state operation performs no allocation.
class Kernel {
public:
    explicit Kernel(std::size_t reserve_events = 4096) {
        heap_.reserve(reserve_events);
    }

    SimTime now() const { return now_; }

    using Dispatcher = std::function<void(const SimEvent&)>;
    void set_dispatcher(Dispatcher d) { dispatcher_ = std::move(d); }

    void enable_log(std::size_t reserve = 4096) {
        logging_ = true;
        log_.reserve(reserve);
    }
    const std::vector<SimEvent>& log() const { return log_; }

    Expected<std::uint64_t, SimError> schedule(SimTime at, EventKind kind, std::uint64_t a = 0,
                                               std::uint64_t b = 0) {
        if (at < now_) {
            return SimError::SchedulePastEvent;
        }
        SimEvent ev{at, next_seq_++, kind, a, b};
        heap_.push_back(ev);
        std::push_heap(heap_.begin(), heap_.end(), later);
        return ev.seq;
    }

    bool pending() const { return !heap_.empty(); }

    /// Dispatch all events with at <= t, in (at, seq) order; the clock never
    /// moves backwards. Returns the number of events dispatched.
    std::size_t run_until(SimTime t) {
        std::size_t dispatched = 0;
        while (!heap_.empty() && heap_.front().at <= t) {
            std::pop_heap(heap_.begin(), heap_.end(), later);
            SimEvent ev = heap_.back();
            heap_.pop_back();
            now_ = std::max(now_, ev.at);
            if (logging_) {
                log_.push_back(ev);
            }
            if (dispatcher_) {
                dispatcher_(ev);
            }
            ++dispatched;
        }
        now_ = std::max(now_, t);
        return dispatched;
    }

    /// Dispatch at most one event with at <= limit. Returns whether an
    /// event was dispatched. Does not advance the clock past the event.
    bool run_next(SimTime limit) {
        if (heap_.empty() || heap_.front().at > limit) {
            return false;
        }
        std::pop_heap(heap_.begin(), heap_.end(), later);
        SimEvent ev = heap_.back();
        heap_.pop_back();
        now_ = std::max(now_, ev.at);
        if (logging_) {
            log_.push_back(ev);
        }
        if (dispatcher_) {
            dispatcher_(ev);
        }
        return true;
    }

    static void export_log_csv(const std::vector<SimEvent>& log, std::ostream& os) {
        os << "time_ns,kind,detail\n";
        for (const auto& ev : log) {
            os << ev.at << ',' << to_string(ev.kind) << ',' << ev.a << '\n';
        }
    }

private:
    // heap comparator: front() is the earliest (at, seq)
    static bool later(const SimEvent& lhs, const SimEvent& rhs) {
        if (lhs.at != rhs.at) {
            return lhs.at > rhs.at;
        }
        return lhs.seq > rhs.seq;
    }

    std::vector<SimEvent> heap_;
    std::vector<SimEvent> log_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
    bool logging_ = false;
    Dispatcher dispatcher_;
};

enum class LinkError { LinkClosed };

/// Reliable in-order byte pipe with a setup latency plus per-byte transfer
/// time. Delivery is modeled at transfer completion; bytes are never
/// corrupted or reordered.
class UartLink {
public:
    explicit UartLink(std::size_t reserve_bytes = 1 << 16) {
        delivered_.reserve(reserve_bytes);
    }

    bool is_open() const { return open_; }
    void close() { open_ = false; }

    /// Returns the completion time: start + setup + len * byte time. The
    /// transfer begins when the line is free (back-to-back sends queue).
    Expected<SimTime, LinkError> transmit(std::span<const std::uint8_t> bytes, SimTime now,
                                          const TimingParams& params) {
        if (!open_) {
            return LinkError::LinkClosed;
        }
        const SimTime start = std::max(now, line_free_at_);
        const SimTime done = start + uart_setup_ns(params) + bytes.size() * uart_byte_ns(params);
        line_free_at_ = done;
        delivered_.insert(delivered_.end(), bytes.begin(), bytes.end());
        tx_sizes_[tx_tail_++ % tx_sizes_.size()] = bytes.size();
        return done;
    }

    /// Pop the next completed transmission, in send order. Call once per
    /// UartTxDone event. Empty span when nothing is pending.
    std::span<const std::uint8_t> next_transmission() {
        if (tx_head_ == tx_tail_) {
            return {};
        }
        const std::size_t n = tx_sizes_[tx_head_++ % tx_sizes_.size()];
        auto out = std::span<const std::uint8_t>(delivered_.data() + consumed_, n);
        consumed_ += n;
        return out;
    }

    std::size_t total_delivered() const { return delivered_.size(); }

private:
    std::vector<std::uint8_t> delivered_;
    std::array<std::size_t, 256> tx_sizes_{};
    std::size_t tx_head_ = 0, tx_tail_ = 0;
    std::size_t consumed_ = 0;
    SimTime line_free_at_ = 0;
    bool open_ = true;
};

}  // namespace vdl::sim
