#pragma once

// Data layer: JSON command/response handling and binary sample encoding.
// Everything here works on fixed-capacity storage owned by the caller;
// no function in this header acquires dynamic memory.
//
// Command grammar (closed, see docs/FORMATS.md):
//   {"get_status":{}}
//   {"set_property":{"sensor":"acc","enable":true,"odr":7680,"full_scale":8}}
//   {"start_log":{}}
//   {"stop_log":{}}
//
// Binary sample layout, little-endian, fixed length per kind:
//   inertial   (14 B): timestamp_us u64 | x i16 | y i16 | z i16
//   classifier ( 9 B): timestamp_us u64 | class_id u8

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>

#include "vdl/fixed.hpp"
#include "vdl/json.hpp"

// Buffer capacities, overridable at build time.
#ifndef VDL_CMD_BUF_CAP
#define VDL_CMD_BUF_CAP 512
#endif
#ifndef VDL_STATUS_BUF_CAP
#define VDL_STATUS_BUF_CAP 1024
#endif

namespace vdl::data {

inline constexpr std::size_t kCmdBufCap = VDL_CMD_BUF_CAP;
inline constexpr std::size_t kStatusBufCap = VDL_STATUS_BUF_CAP;
inline constexpr std::size_t kNameCap = 32;
inline constexpr std::size_t kMaxSensors = 8;

using Name = FixedString<kNameCap>;

// Output data rates supported by the virtual IMU: a doubling ladder from
// 15 Hz to 7680 Hz.
inline constexpr std::uint32_t kOdrLadder[] = {15, 30, 60, 120, 240, 480, 960, 1920, 3840, 7680};
inline constexpr std::size_t kOdrLadderSize = sizeof(kOdrLadder) / sizeof(kOdrLadder[0]);

inline bool odr_in_ladder(std::uint32_t hz) {
    for (auto v : kOdrLadder) {
        if (v == hz) {
            return true;
        }
    }
    return false;
}

enum class SensorKind : std::uint8_t { Accelerometer, Gyroscope, MlcClassifier };

inline const char* to_string(SensorKind k) {
    switch (k) {
        case SensorKind::Accelerometer: return "accelerometer";
        case SensorKind::Gyroscope: return "gyroscope";
        case SensorKind::MlcClassifier: return "mlc";
    }
    return "?";
}

struct SensorConfig {
    bool enabled = false;
    std::uint32_t odr_hz = 0;
    std::int32_t full_scale = 0;

    bool operator==(const SensorConfig&) const = default;
};

struct SensorDescriptor {
    Name name;
    std::uint8_t channel_id = 0;  // 1..15, unique per device
    SensorKind kind = SensorKind::Accelerometer;
    FixedVec<std::uint32_t, kOdrLadderSize> supported_odrs;  // strictly increasing
    FixedVec<std::int32_t, 8> full_scales;

    bool operator==(const SensorDescriptor&) const = default;
};

struct DeviceModel {
    Name device_name;
    Name firmware_version;
    FixedVec<SensorDescriptor, kMaxSensors> sensors;

    const SensorDescriptor* find_sensor(std::string_view name) const {
        for (const auto& s : sensors) {
            if (s.name == name) {
                return &s;
            }
        }
        return nullptr;
    }

    int sensor_index(std::string_view name) const {
        for (std::size_t i = 0; i < sensors.size(); ++i) {
            if (sensors[i].name == name) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    bool valid() const {
        for (std::size_t i = 0; i < sensors.size(); ++i) {
            const auto& s = sensors[i];
            if (s.channel_id < 1 || s.channel_id > 15 || s.supported_odrs.empty()) {
                return false;
            }
            for (std::size_t k = 1; k < s.supported_odrs.size(); ++k) {
                if (s.supported_odrs[k] <= s.supported_odrs[k - 1]) {
                    return false;
                }
            }
            for (std::size_t j = i + 1; j < sensors.size(); ++j) {
                if (sensors[j].channel_id == s.channel_id) {
                    return false;
                }
            }
        }
        return true;
    }
};

enum class DataError {
    MalformedJson,
    UnknownCommand,
    UnknownSensor,
    ValueOutOfRange,
    CapacityExceeded,
};

inline const char* to_string(DataError e) {
    switch (e) {
        case DataError::MalformedJson: return "MalformedJson";
        case DataError::UnknownCommand: return "UnknownCommand";
        case DataError::UnknownSensor: return "UnknownSensor";
        case DataError::ValueOutOfRange: return "ValueOutOfRange";
        case DataError::CapacityExceeded: return "CapacityExceeded";
    }
    return "?";
}

enum class CommandKind : std::uint8_t { GetStatus, SetProperty, StartLog, StopLog };

/// A decoded command. SetProperty fields are optional: absent members
/// leave the corresponding part of the sensor's config unchanged.
struct Command {
    CommandKind kind = CommandKind::GetStatus;

    Name sensor_name;
    bool has_enable = false;
    bool enable = false;
    bool has_odr = false;
    std::uint32_t odr_hz = 0;
    bool has_full_scale = false;
    std::int32_t full_scale = 0;

    bool operator==(const Command&) const = default;
};

inline Expected<Command, DataError> parse_command(std::string_view json_bytes,
                                                  const DeviceModel& model) {
    if (json_bytes.size() > kCmdBufCap) {
        return DataError::CapacityExceeded;
    }
    json::Reader r(json_bytes);
    FixedString<kNameCap> top;
    if (!r.object_begin() || !r.key(top)) {
        return r.capacity_hit() ? DataError::CapacityExceeded : DataError::MalformedJson;
    }

    Command cmd;
    if (top == "get_status") {
        cmd.kind = CommandKind::GetStatus;
    } else if (top == "start_log") {
        cmd.kind = CommandKind::StartLog;
    } else if (top == "stop_log") {
        cmd.kind = CommandKind::StopLog;
    } else if (top == "set_property") {
        cmd.kind = CommandKind::SetProperty;
    } else {
        // well-formed single-key object with a name we do not know
        if (r.skip_value() && r.object_end() && r.at_end()) {
            return DataError::UnknownCommand;
        }
        return DataError::MalformedJson;
    }

    if (cmd.kind != CommandKind::SetProperty) {
        if (!r.object_begin() || !r.object_end() || !r.object_end() || !r.at_end()) {
            return DataError::MalformedJson;
        }
        return cmd;
    }

    if (!r.object_begin()) {
        return DataError::MalformedJson;
    }
    bool first = true;
    while (r.peek() != '}') {
        if (!first && !r.comma()) {
            return DataError::MalformedJson;
        }
        first = false;
        FixedString<kNameCap> k;
        if (!r.key(k)) {
            return r.capacity_hit() ? DataError::CapacityExceeded : DataError::MalformedJson;
        }
        if (k == "sensor") {
            if (!r.string(cmd.sensor_name)) {
                return r.capacity_hit() ? DataError::CapacityExceeded : DataError::MalformedJson;
            }
        } else if (k == "enable") {
            if (!r.boolean(cmd.enable)) {
                return DataError::MalformedJson;
            }
            cmd.has_enable = true;
        } else if (k == "odr") {
            std::int64_t v;
            if (!r.integer(v)) {
                return DataError::MalformedJson;
            }
            if (v < 0 || v > 0xFFFFFFFFLL) {
                return DataError::ValueOutOfRange;
            }
            cmd.odr_hz = static_cast<std::uint32_t>(v);
            cmd.has_odr = true;
        } else if (k == "full_scale") {
            std::int64_t v;
            if (!r.integer(v)) {
                return DataError::MalformedJson;
            }
            if (v < INT32_MIN || v > INT32_MAX) {
                return DataError::ValueOutOfRange;
            }
            cmd.full_scale = static_cast<std::int32_t>(v);
            cmd.has_full_scale = true;
        } else {
            return DataError::MalformedJson;
        }
    }
    if (!r.object_end() || !r.object_end() || !r.at_end()) {
        return DataError::MalformedJson;
    }

    if (cmd.sensor_name.empty()) {
        return DataError::MalformedJson;
    }
    const SensorDescriptor* desc = model.find_sensor(cmd.sensor_name.view());
    if (desc == nullptr) {
        return DataError::UnknownSensor;
    }
    if (cmd.has_odr) {
        bool supported = false;
        for (auto v : desc->supported_odrs) {
            supported = supported || (v == cmd.odr_hz);
        }
        if (!supported) {
            return DataError::ValueOutOfRange;
        }
    }
    if (cmd.has_full_scale) {
        bool supported = false;
        for (auto v : desc->full_scales) {
            supported = supported || (v == cmd.full_scale);
        }
        if (!supported) {
            return DataError::ValueOutOfRange;
        }
    }
    return cmd;
}

struct SensorStatusEntry {
    Name name;
    SensorConfig config;

    bool operator==(const SensorStatusEntry&) const = default;
};

struct DeviceStatus {
    Name device_name;
    Name firmware_version;
    bool streaming = false;
    FixedVec<SensorStatusEntry, kMaxSensors> sensors;

    bool operator==(const DeviceStatus&) const = default;
};

/// Serialize a status snapshot into `out`. Returns the byte count written.
inline Expected<std::size_t, DataError> serialize_status(const DeviceStatus& status,
                                                         std::span<char> out) {
    json::Writer w(out);
    w.raw("{\"device\":");
    w.string(status.device_name.view());
    w.raw(",\"firmware\":");
    w.string(status.firmware_version.view());
    w.raw(",\"streaming\":");
    w.boolean(status.streaming);
    w.raw(",\"sensors\":[");
    for (std::size_t i = 0; i < status.sensors.size(); ++i) {
        if (i > 0) {
            w.raw(",");
        }
        const auto& s = status.sensors[i];
        w.raw("{\"name\":");
        w.string(s.name.view());
        w.raw(",\"enabled\":");
        w.boolean(s.config.enabled);
        w.raw(",\"odr\":");
        w.integer(s.config.odr_hz);
        w.raw(",\"full_scale\":");
        w.integer(s.config.full_scale);
        w.raw("}");
    }
    w.raw("]}");
    if (w.overflow()) {
        return DataError::CapacityExceeded;
    }
    return w.size();
}

inline Expected<DeviceStatus, DataError> parse_status(std::string_view json_bytes) {
    json::Reader r(json_bytes);
    DeviceStatus st;
    FixedString<kNameCap> k;
    std::int64_t n = 0;
    bool ok = r.object_begin();
    ok = ok && r.key(k) && k == "device" && r.string(st.device_name);
    ok = ok && r.comma() && r.key(k) && k == "firmware" && r.string(st.firmware_version);
    ok = ok && r.comma() && r.key(k) && k == "streaming" && r.boolean(st.streaming);
    ok = ok && r.comma() && r.key(k) && k == "sensors" && r.array_begin();
    if (!ok) {
        return r.capacity_hit() ? DataError::CapacityExceeded : DataError::MalformedJson;
    }
    bool first = true;
    while (r.peek() != ']') {
        if (!first && !r.comma()) {
            return DataError::MalformedJson;
        }
        first = false;
        SensorStatusEntry e;
        bool eok = r.object_begin();
        eok = eok && r.key(k) && k == "name" && r.string(e.name);
        eok = eok && r.comma() && r.key(k) && k == "enabled" && r.boolean(e.config.enabled);
        eok = eok && r.comma() && r.key(k) && k == "odr" && r.integer(n);
        e.config.odr_hz = static_cast<std::uint32_t>(n);
        eok = eok && r.comma() && r.key(k) && k == "full_scale" && r.integer(n);
        e.config.full_scale = static_cast<std::int32_t>(n);
        eok = eok && r.object_end();
        if (!eok) {
            return r.capacity_hit() ? DataError::CapacityExceeded : DataError::MalformedJson;
        }
        if (!st.sensors.push_back(e)) {
            return DataError::CapacityExceeded;
        }
    }
    if (!r.array_end() || !r.object_end() || !r.at_end()) {
        return DataError::MalformedJson;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Binary sample encoding
// ---------------------------------------------------------------------------

enum class SampleKind : std::uint8_t { Inertial, Classifier };

inline constexpr std::size_t kInertialSampleSize = 14;
inline constexpr std::size_t kClassifierSampleSize = 9;

struct SampleRecord {
    SampleKind kind = SampleKind::Inertial;
    std::uint64_t timestamp_us = 0;
    std::int16_t x = 0, y = 0, z = 0;  // raw counts (inertial)
    std::uint8_t class_id = 0;         // classifier

    bool operator==(const SampleRecord&) const = default;
};

inline std::size_t sample_encoded_size(SampleKind kind) {
    return kind == SampleKind::Inertial ? kInertialSampleSize : kClassifierSampleSize;
}

namespace detail {
inline void put_le(std::uint8_t* p, std::uint64_t v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
}
inline std::uint64_t get_le(const std::uint8_t* p, std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    }
    return v;
}
}  // namespace detail

inline Expected<std::size_t, DataError> encode_sample(const SampleRecord& record,
                                                      std::span<std::uint8_t> out) {
    const std::size_t need = sample_encoded_size(record.kind);
    if (out.size() < need) {
        return DataError::CapacityExceeded;
    }
    detail::put_le(out.data(), record.timestamp_us, 8);
    if (record.kind == SampleKind::Inertial) {
        detail::put_le(out.data() + 8, static_cast<std::uint16_t>(record.x), 2);
        detail::put_le(out.data() + 10, static_cast<std::uint16_t>(record.y), 2);
        detail::put_le(out.data() + 12, static_cast<std::uint16_t>(record.z), 2);
    } else {
        out[8] = record.class_id;
    }
    return need;
}

inline Expected<SampleRecord, DataError> decode_sample(SampleKind kind,
                                                       std::span<const std::uint8_t> bytes) {
    const std::size_t need = sample_encoded_size(kind);
    if (bytes.size() != need) {
        return DataError::CapacityExceeded;
    }
    SampleRecord r;
    r.kind = kind;
    r.timestamp_us = detail::get_le(bytes.data(), 8);
    if (kind == SampleKind::Inertial) {
        r.x = static_cast<std::int16_t>(detail::get_le(bytes.data() + 8, 2));
        r.y = static_cast<std::int16_t>(detail::get_le(bytes.data() + 10, 2));
        r.z = static_cast<std::int16_t>(detail::get_le(bytes.data() + 12, 2));
    } else {
        r.class_id = bytes[8];
    }
    return r;
}

/// Device model used by the trace/sweep presets and most tests: the
/// accelerometer and gyroscope of a virtual 6-axis IMU plus its in-sensor
/// classifier channel.
inline DeviceModel default_device_model() {
    DeviceModel m;
    m.device_name.assign("vdl-sim");
    m.firmware_version.assign("1.0.0");

    SensorDescriptor acc;
    acc.name.assign("acc");
    acc.channel_id = 1;
    acc.kind = SensorKind::Accelerometer;
    for (auto v : kOdrLadder) {
        acc.supported_odrs.push_back(v);
    }
    for (auto fs : {2, 4, 8, 16}) {
        acc.full_scales.push_back(fs);
    }
    m.sensors.push_back(acc);

    SensorDescriptor gyro;
    gyro.name.assign("gyro");
    gyro.channel_id = 2;
    gyro.kind = SensorKind::Gyroscope;
    for (auto v : kOdrLadder) {
        gyro.supported_odrs.push_back(v);
    }
    for (auto fs : {250, 500, 1000, 2000}) {
        gyro.full_scales.push_back(fs);
    }
    m.sensors.push_back(gyro);

    SensorDescriptor mlc;
    mlc.name.assign("mlc");
    mlc.channel_id = 3;
    mlc.kind = SensorKind::MlcClassifier;
    for (auto v : {15u, 30u, 60u}) {
        mlc.supported_odrs.push_back(v);
    }
    mlc.full_scales.push_back(1);
    m.sensors.push_back(mlc);

    return m;
}

}  // namespace vdl::data
