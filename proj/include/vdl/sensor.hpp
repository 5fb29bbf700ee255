#pragma once

// Virtual 6-axis-IMU-style sensor: generates samples on an ODR clock with
// rational skew, raises data-ready events, and is read over the simulated
// I2C bus. Sample content is a seeded deterministic walk; the classifier
// channel replays a scripted label sequence.

#include <cstdint>
#include <utility>

#include "vdl/data_layer.hpp"
#include "vdl/sim.hpp"

namespace vdl::sensor {

enum class SensorError { SensorDisabled, NoDataReady };

inline const char* to_string(SensorError e) {
    switch (e) {
        case SensorError::SensorDisabled: return "SensorDisabled";
        case SensorError::NoDataReady: return "NoDataReady";
    }
    return "?";
}

/// splitmix64; one step per draw, fully determined by the seed.
inline std::uint64_t mix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class VirtualSensor {
public:
    VirtualSensor() = default;
    VirtualSensor(std::uint32_t id, const data::SensorDescriptor& desc, std::uint64_t seed,
                  std::uint64_t skew_num = 7477, std::uint64_t skew_den = 7680)
        : id_(id), desc_(desc), seed_(seed), skew_num_(skew_num), skew_den_(skew_den) {
        rng_ = seed;
    }

    std::uint32_t id() const { return id_; }
    const data::SensorDescriptor& descriptor() const { return desc_; }
    data::SensorConfig& config() { return config_; }
    const data::SensorConfig& config() const { return config_; }

    void set_skew(std::uint64_t num, std::uint64_t den) {
        skew_num_ = num;
        skew_den_ = den;
    }

    bool drdy_pending() const { return drdy_pending_; }
    std::uint64_t samples_generated() const { return samples_generated_; }
    std::uint64_t samples_read() const { return samples_read_; }
    std::uint64_t overruns() const { return overruns_; }

    /// Achieved interrupt period in ns: 1 / (odr * skew), rounded.
    std::uint64_t period_ns() const {
        const std::uint64_t denom = static_cast<std::uint64_t>(config_.odr_hz) * skew_num_;
        if (denom == 0) {
            throw LogicError("period_ns: sensor has no ODR configured");
        }
        // 1e9 * skew_den / (odr * skew_num)
        const unsigned __int128 num = static_cast<unsigned __int128>(1'000'000'000ULL) * skew_den_;
        return static_cast<std::uint64_t>((num + denom / 2) / denom);
    }

    /// Schedule the next data-ready event. The DRDY clock is anchored at the
    /// epoch set by start_clock(), so periods accumulate without drift.
    Expected<sim::SimEvent, SensorError> tick_drdy(sim::Kernel& kernel, sim::SimTime now) {
        if (!config_.enabled) {
            return SensorError::SensorDisabled;
        }
        ++edge_index_;
        const std::uint64_t denom = static_cast<std::uint64_t>(config_.odr_hz) * skew_num_;
        const unsigned __int128 ticks =
            static_cast<unsigned __int128>(edge_index_) * 1'000'000'000ULL * skew_den_;
        const sim::SimTime at =
            clock_epoch_ + static_cast<std::uint64_t>((ticks + denom / 2) / denom);
        sim::SimEvent ev;
        ev.at = std::max(at, now);
        ev.kind = sim::EventKind::SensorDrdy;
        ev.a = id_;
        auto seq = kernel.schedule(ev.at, ev.kind, ev.a);
        if (seq.ok()) {
            ev.seq = *seq;
        }
        return ev;
    }

    void start_clock(sim::SimTime epoch) {
        clock_epoch_ = epoch;
        edge_index_ = 0;
    }

    /// Called when the scheduled SensorDrdy event fires: latch a fresh
    /// sample. A latch over an unread sample is an overrun (data lost).
    void on_drdy() {
        if (drdy_pending_) {
            ++overruns_;
        }
        generate_sample();
        ++samples_generated_;
        drdy_pending_ = true;
    }

    /// One blocking I2C transaction reading the latched sample.
    /// Returns the sample and the bus completion time.
    Expected<std::pair<data::SampleRecord, sim::SimTime>, SensorError> i2c_read_sample(
        sim::SimTime now, const sim::TimingParams& params) {
        if (!drdy_pending_) {
            return SensorError::NoDataReady;
        }
        drdy_pending_ = false;
        ++samples_read_;
        data::SampleRecord rec = latched_;
        rec.timestamp_us = now / 1000;
        return std::make_pair(rec, now + params.i2c_read_ns);
    }

private:
    void generate_sample() {
        latched_.kind = (desc_.kind == data::SensorKind::MlcClassifier)
                            ? data::SampleKind::Classifier
                            : data::SampleKind::Inertial;
        if (latched_.kind == data::SampleKind::Classifier) {
            static constexpr std::uint8_t kScript[] = {0, 0, 1, 1, 2, 1, 0, 2};
            latched_.class_id = kScript[(seed_ + samples_generated_) % (sizeof kScript)];
        } else {
            // bounded random walk in raw counts
            auto step = [this]() {
                return static_cast<std::int16_t>(static_cast<std::int64_t>(mix64(rng_) % 65) - 32);
            };
            walk_x_ = clamp_counts(walk_x_ + step());
            walk_y_ = clamp_counts(walk_y_ + step());
            walk_z_ = clamp_counts(walk_z_ + step());
            latched_.x = walk_x_;
            latched_.y = walk_y_;
            latched_.z = walk_z_;
        }
    }

    static std::int16_t clamp_counts(std::int32_t v) {
        if (v > 32000) {
            return 32000;
        }
        if (v < -32000) {
            return -32000;
        }
        return static_cast<std::int16_t>(v);
    }

    std::uint32_t id_ = 0;
    data::SensorDescriptor desc_;
    data::SensorConfig config_;
    std::uint64_t seed_ = 0;
    std::uint64_t rng_ = 0;
    std::uint64_t skew_num_ = 7477;
    std::uint64_t skew_den_ = 7680;

    sim::SimTime clock_epoch_ = 0;
    std::uint64_t edge_index_ = 0;

    bool drdy_pending_ = false;
    data::SampleRecord latched_;
    std::int16_t walk_x_ = 0, walk_y_ = 0, walk_z_ = 0;
    std::uint64_t samples_generated_ = 0;
    std::uint64_t samples_read_ = 0;
    std::uint64_t overruns_ = 0;
};

/// Resolve which sensors triggered a shared interrupt line. The optimized
/// path uses the saved configuration and costs no bus time; the
/// pre-optimization path spends one extra I2C transaction on a DRDY status
/// read.
template <std::size_t N>
inline std::pair<FixedVec<std::uint32_t, N>, std::uint64_t> resolve_drdy_source(
    const FixedVec<std::uint32_t, N>& flagged_ids, const sim::TimingParams& params) {
    const std::uint64_t cost = params.drdy_via_status_read ? params.i2c_read_ns : 0;
    return {flagged_ids, cost};
}

}  // namespace vdl::sensor
