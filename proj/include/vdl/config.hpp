#pragma once

// Key-value config files:
//
// Timing config (one `key = value` per line, '#' comments):
//   cpu_clock_hz, task_switch_cycles, i2c_read_ns, uart_baud,
//   uart_bits_per_byte, uart_fifo_enabled, uart_setup_ns,
//   logging_overhead_ns, exti_overhead_ns, serialize_ns,
//   uart_transition_ns, uart_kick_ns, exti_return_overhead_ns,
//   drdy_via_status_read, odr_hz, skew (as num/den), seed
//
// Sensor fixture files use dotted keys:
//   device_name, firmware, sensor.<i>.name/.kind/.channel/.odrs/
//   .full_scales/.skew/.seed

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "vdl/bench.hpp"
#include "vdl/data_layer.hpp"

namespace vdl::config {

struct ConfigError {
    std::string message;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline bool parse_u64(std::string_view v, std::uint64_t& out) {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc{} && p == v.data() + v.size();
}

inline bool parse_i64(std::string_view v, std::int64_t& out) {
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    return ec == std::errc{} && p == v.data() + v.size();
}

inline bool parse_bool(std::string_view v, bool& out) {
    if (v == "true" || v == "1") {
        out = true;
        return true;
    }
    if (v == "false" || v == "0") {
        out = false;
        return true;
    }
    return false;
}

/// "num/den" rational, or a bare "1" for no skew.
inline bool parse_ratio(std::string_view v, std::uint64_t& num, std::uint64_t& den) {
    const auto slash = v.find('/');
    if (slash == std::string_view::npos) {
        if (!parse_u64(v, num)) {
            return false;
        }
        den = 1;
        return true;
    }
    return parse_u64(trim(v.substr(0, slash)), num) &&
           parse_u64(trim(v.substr(slash + 1)), den) && den != 0;
}

template <typename Fn>
inline Expected<std::monostate, ConfigError> for_each_entry(std::istream& in, Fn&& fn) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') {
            continue;
        }
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos) {
            return ConfigError{"line " + std::to_string(lineno) + ": expected key = value"};
        }
        const auto key = trim(sv.substr(0, eq));
        const auto value = trim(sv.substr(eq + 1));
        if (!fn(key, value)) {
            return ConfigError{"line " + std::to_string(lineno) + ": bad entry '" +
                               std::string(sv) + "'"};
        }
    }
    return std::monostate{};
}

}  // namespace detail

inline Expected<bench::BenchConfig, ConfigError> parse_timing_config(std::istream& in) {
    bench::BenchConfig cfg;
    auto& p = cfg.params;
    auto r = detail::for_each_entry(in, [&](std::string_view key, std::string_view value) {
        std::uint64_t u = 0;
        std::int64_t i = 0;
        bool b = false;
        if (key == "cpu_clock_hz" && detail::parse_u64(value, u)) {
            p.cpu_clock_hz = u;
        } else if (key == "task_switch_cycles" && detail::parse_u64(value, u)) {
            p.task_switch_cycles = u;
        } else if (key == "i2c_read_ns" && detail::parse_u64(value, u)) {
            p.i2c_read_ns = u;
        } else if (key == "uart_baud" && detail::parse_u64(value, u)) {
            p.uart_baud = u;
        } else if (key == "uart_bits_per_byte" && detail::parse_u64(value, u)) {
            p.uart_bits_per_byte = u;
        } else if (key == "uart_fifo_enabled" && detail::parse_bool(value, b)) {
            p.uart_fifo_enabled = b;
        } else if (key == "uart_setup_ns" && detail::parse_i64(value, i)) {
            p.uart_setup_ns = i;
        } else if (key == "logging_overhead_ns" && detail::parse_u64(value, u)) {
            p.logging_overhead_ns = u;
        } else if (key == "exti_overhead_ns" && detail::parse_u64(value, u)) {
            p.exti_overhead_ns = u;
        } else if (key == "serialize_ns" && detail::parse_u64(value, u)) {
            p.serialize_ns = u;
        } else if (key == "uart_transition_ns" && detail::parse_u64(value, u)) {
            p.uart_transition_ns = u;
        } else if (key == "uart_kick_ns" && detail::parse_u64(value, u)) {
            p.uart_kick_ns = u;
        } else if (key == "exti_return_overhead_ns" && detail::parse_u64(value, u)) {
            p.exti_return_overhead_ns = u;
        } else if (key == "drdy_via_status_read" && detail::parse_bool(value, b)) {
            p.drdy_via_status_read = b;
        } else if (key == "odr_hz" && detail::parse_u64(value, u)) {
            cfg.odr_hz = static_cast<std::uint32_t>(u);
        } else if (key == "skew") {
            return detail::parse_ratio(value, cfg.skew_num, cfg.skew_den);
        } else if (key == "seed" && detail::parse_u64(value, u)) {
            cfg.seed = u;
        } else {
            return false;
        }
        return true;
    });
    if (!r.ok()) {
        return r.error();
    }
    return cfg;
}

inline Expected<bench::BenchConfig, ConfigError> load_timing_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return ConfigError{"cannot open config file: " + path};
    }
    return parse_timing_config(in);
}

struct SensorFixtureEntry {
    std::uint64_t skew_num = 7477;
    std::uint64_t skew_den = 7680;
    std::uint64_t seed = 1;
};

struct SensorFixture {
    data::DeviceModel model;
    FixedVec<SensorFixtureEntry, data::kMaxSensors> entries;
};

inline Expected<SensorFixture, ConfigError> parse_sensor_fixture(std::istream& in) {
    SensorFixture fx;
    auto ensure_slot = [&](std::size_t idx) {
        while (fx.model.sensors.size() <= idx) {
            fx.model.sensors.push_back(data::SensorDescriptor{});
            fx.entries.push_back(SensorFixtureEntry{});
        }
        return idx < data::kMaxSensors;
    };
    auto r = detail::for_each_entry(in, [&](std::string_view key, std::string_view value) {
        if (key == "device_name") {
            return fx.model.device_name.assign(value);
        }
        if (key == "firmware") {
            return fx.model.firmware_version.assign(value);
        }
        if (!key.starts_with("sensor.")) {
            return false;
        }
        key.remove_prefix(7);
        const auto dot = key.find('.');
        if (dot == std::string_view::npos) {
            return false;
        }
        std::uint64_t idx = 0;
        if (!detail::parse_u64(key.substr(0, dot), idx) || !ensure_slot(idx)) {
            return false;
        }
        auto& desc = fx.model.sensors[idx];
        auto& entry = fx.entries[idx];
        const auto field = key.substr(dot + 1);
        std::uint64_t u = 0;
        if (field == "name") {
            return desc.name.assign(value);
        }
        if (field == "kind") {
            if (value == "accelerometer") {
                desc.kind = data::SensorKind::Accelerometer;
            } else if (value == "gyroscope") {
                desc.kind = data::SensorKind::Gyroscope;
            } else if (value == "mlc") {
                desc.kind = data::SensorKind::MlcClassifier;
            } else {
                return false;
            }
            return true;
        }
        if (field == "channel" && detail::parse_u64(value, u)) {
            desc.channel_id = static_cast<std::uint8_t>(u);
            return true;
        }
        if (field == "odrs" || field == "full_scales") {
            std::string_view rest = value;
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto item = detail::trim(rest.substr(0, comma));
                if (field == "odrs") {
                    if (!detail::parse_u64(item, u) ||
                        !desc.supported_odrs.push_back(static_cast<std::uint32_t>(u))) {
                        return false;
                    }
                } else {
                    std::int64_t i = 0;
                    if (!detail::parse_i64(item, i) ||
                        !desc.full_scales.push_back(static_cast<std::int32_t>(i))) {
                        return false;
                    }
                }
                if (comma == std::string_view::npos) {
                    break;
                }
                rest = rest.substr(comma + 1);
            }
            return true;
        }
        if (field == "skew") {
            return detail::parse_ratio(value, entry.skew_num, entry.skew_den);
        }
        if (field == "seed" && detail::parse_u64(value, u)) {
            entry.seed = u;
            return true;
        }
        return false;
    });
    if (!r.ok()) {
        return r.error();
    }
    if (!fx.model.valid()) {
        return ConfigError{"sensor fixture violates device model invariants"};
    }
    return fx;
}

inline Expected<SensorFixture, ConfigError> load_sensor_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return ConfigError{"cannot open fixture file: " + path};
    }
    return parse_sensor_fixture(in);
}

}  // namespace vdl::config
