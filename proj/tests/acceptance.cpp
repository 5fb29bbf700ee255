// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Runs standalone (registered with ctest, no test framework).
//
// Environment:
//   VDL_PRESET_DIR  directory with the shipped timing presets (default: presets)
//   VDL_SELF_ELF    ELF binary to analyze for the parser-oracle criterion
//                   (default: /proc/self/exe)

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vdl/bench.hpp"
#include "vdl/config.hpp"
#include "vdl/footprint.hpp"
#include "vdl/harness.hpp"

// ---------------------------------------------------------------------------
// Global allocation counter (criterion: allocation-free streaming path).
// ---------------------------------------------------------------------------

namespace {
std::atomic<bool> g_count_allocs{false};
std::atomic<std::uint64_t> g_alloc_count{0};
}  // namespace

void* operator new(std::size_t n) {
    if (g_count_allocs.load(std::memory_order_relaxed)) {
        g_alloc_count.fetch_add(1, std::memory_order_relaxed);
    }
    if (void* p = std::malloc(n ? n : 1)) {
        return p;
    }
    throw std::bad_alloc{};
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail = {}) {
    std::printf("%s: %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : " — ",
                detail.c_str());
    if (!ok) {
        ++g_failures;
    }
}

std::string preset_path(const char* file) {
    const char* dir = std::getenv("VDL_PRESET_DIR");
    return std::string(dir ? dir : "presets") + "/" + file;
}

vdl::bench::BenchConfig must_load(const char* file) {
    auto cfg = vdl::config::load_timing_config(preset_path(file));
    if (!cfg.ok()) {
        std::printf("FAIL: cannot load preset %s: %s\n", file, cfg.error().message.c_str());
        std::exit(1);
    }
    return *cfg;
}

// ---------------------------------------------------------------------------
// 1. Trace reproduction with the shipped presets, plus interval closure.
// ---------------------------------------------------------------------------

void criterion_trace_reproduction() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fsm = vdl::bench::run_trace(vdl::agent::AgentMode::FsmLoop,
                                           must_load("fig9.cfg"), 50);
    const auto tasks = vdl::bench::run_trace(vdl::agent::AgentMode::EventTasks,
                                             must_load("fig10.cfg"), 50);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    std::ostringstream why;
    bool ok = true;
    auto expect = [&](const char* what, std::uint64_t got, std::uint64_t want) {
        if (got != want) {
            ok = false;
            why << what << "=" << got << " (want " << want << ") ";
        }
    };
    expect("fsm.p0", fsm.p0_ns, 133'750);
    expect("fsm.p1", fsm.p1_ns, 1'958);
    expect("fsm.p4", fsm.p4_ns, 2'542);
    expect("fsm.p5", fsm.p5_ns, 13'875);
    expect("tasks.p1", tasks.p1_ns, 3'458);
    expect("tasks.p4", tasks.p4_ns, 4'417);
    expect("tasks.p6", tasks.p6_ns, 4'000);
    expect("tasks.p5", tasks.p5_ns, 6'500);
    if (!fsm.closure_ok || !tasks.closure_ok) {
        ok = false;
        why << "interval closure violated ";
    }
    if (secs >= 1.0) {
        ok = false;
        why << "runtime " << secs << " s ";
    }
    report("trace intervals match the shipped presets exactly, closure holds, <1 s", ok,
           why.str());
}

// ---------------------------------------------------------------------------
// 2. Deadline claim: drops vs busy span at the top of the rate ladder.
// ---------------------------------------------------------------------------

void criterion_deadline() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto post = must_load("post_optimization.cfg");
    const auto pre = must_load("pre_optimization.cfg");
    const auto sweep_post = vdl::bench::run_sweep(vdl::agent::AgentMode::FsmLoop, post,
                                                  {7680}, 10'000);
    const auto sweep_pre = vdl::bench::run_sweep(vdl::agent::AgentMode::FsmLoop, pre,
                                                 {3840, 7680}, 10'000);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
    std::ostringstream why;
    bool ok = true;
    if (sweep_post.points[0].drops != 0) {
        ok = false;
        why << "post-optimization drops at 7680 Hz: " << sweep_post.points[0].drops << " ";
    }
    if (sweep_pre.points[0].drops != 0) {
        ok = false;
        why << "pre-optimization drops at 3840 Hz: " << sweep_pre.points[0].drops << " ";
    }
    if (sweep_pre.points[1].drops == 0) {
        ok = false;
        why << "pre-optimization shows no drops at 7680 Hz ";
    }
    if (secs >= 5.0) {
        ok = false;
        why << "runtime " << secs << " s ";
    }
    report("120 us busy span sustains 7680 Hz; 140 us drops at 7680 Hz only, <5 s", ok,
           why.str());
}

// ---------------------------------------------------------------------------
// 3. Task-switch latency model at two clock rates.
// ---------------------------------------------------------------------------

void criterion_task_switch() {
    vdl::sim::TimingParams p;  // 272 cycles @ 160 MHz
    const std::uint64_t at160 = vdl::sim::task_switch_latency_ns(p);
    p.cpu_clock_hz = 84'000'000;
    const std::uint64_t at84 = vdl::sim::task_switch_latency_ns(p);
    std::ostringstream why;
    bool ok = true;
    if (at160 < 1'699 || at160 > 1'701) {
        ok = false;
        why << "160 MHz: " << at160 << " ns ";
    }
    if (at84 < 3'200 || at84 > 3'300) {
        ok = false;
        why << "84 MHz: " << at84 << " ns ";
    }
    report("task-switch latency: 1700 ns at 160 MHz, 3.2-3.3 us at 84 MHz", ok, why.str());
}

// ---------------------------------------------------------------------------
// 4. Memory-report arithmetic from the published table inputs.
// ---------------------------------------------------------------------------

void criterion_memory_table() {
    const auto c = vdl::elf::build_memory_report(66'240, 10'504, 2'048, 14'960, 25'600,
                                                 44'656);
    const auto rs = vdl::elf::build_memory_report(69'764, 14'336, 10'240, 14'400, 0);
    std::ostringstream why;
    bool ok = true;
    if (c.total_rom != 76'744 || rs.total_rom != 84'100) {
        ok = false;
        why << "total_rom " << c.total_rom << "/" << rs.total_rom << " ";
    }
    if (c.total_ram != 42'608 || rs.total_ram != 24'640) {
        ok = false;
        why << "total_ram " << c.total_ram << "/" << rs.total_ram << " ";
    }
    const std::int64_t delta = static_cast<std::int64_t>(rs.total_ram) -
                               static_cast<std::int64_t>(c.total_ram);
    if (delta != -17'968) {
        ok = false;
        why << "delta " << delta << " ";
    }
    // The quoted RAM total stays a distinct field; it must not be folded
    // into the computed total.
    if (c.quoted_total_ram != 44'656 || c.quoted_total_matches() ||
        c.total_ram == static_cast<std::uint64_t>(c.quoted_total_ram)) {
        ok = false;
        why << "quoted/computed RAM totals merged ";
    }
    report("memory report reproduces 76744/84100 ROM, 42608/24640 RAM, delta -17968", ok,
           why.str());
}

// ---------------------------------------------------------------------------
// 5. Allocation-free streaming: 1000 cycles with a counting global new.
// ---------------------------------------------------------------------------

void criterion_zero_allocation() {
    vdl::sim::Kernel kernel(1 << 15);
    auto model = vdl::data::default_device_model();
    std::vector<vdl::sensor::VirtualSensor> sensors;
    sensors.reserve(model.sensors.size());
    for (std::size_t i = 0; i < model.sensors.size(); ++i) {
        sensors.emplace_back(static_cast<std::uint32_t>(i), model.sensors[i], 1 + i);
    }
    vdl::sim::UartLink link(1 << 21);
    vdl::sim::TimingParams params;
    vdl::agent::Agent agent(vdl::agent::AgentMode::FsmLoop, kernel, sensors, link, model,
                            params);
    kernel.set_dispatcher([&](const vdl::sim::SimEvent& ev) {
        switch (ev.kind) {
            case vdl::sim::EventKind::SensorDrdy: {
                auto& s = sensors[ev.a];
                if (agent.state() == vdl::agent::FsmState::Streaming && s.config().enabled) {
                    s.on_drdy();
                    (void)agent.on_drdy_interrupt(static_cast<std::uint32_t>(ev.a), ev.at);
                    (void)s.tick_drdy(kernel, ev.at);
                }
                break;
            }
            case vdl::sim::EventKind::UartTxDone:
                (void)link.next_transmission();  // pop; frames are discarded
                break;
            default:
                agent.on_event(ev);
                break;
        }
    });

    auto send = [&](const std::string& json) {
        vdl::proto::Frame f;
        f.packet_type = vdl::proto::PacketType::Command;
        f.payload.assign(json.begin(), json.end());
        auto bytes = vdl::proto::encode_frame(f);
        agent.on_rx_bytes(*bytes, kernel.now());
        kernel.run_until(kernel.now() + 1'000'000);
    };
    send("{\"set_property\":{\"sensor\":\"acc\",\"enable\":true,\"odr\":7680}}");
    send("{\"start_log\":{}}");
    const std::uint64_t period = sensors[0].period_ns();
    kernel.run_until(kernel.now() + 10 * period);  // settle into steady state

    g_alloc_count.store(0);
    g_count_allocs.store(true);
    kernel.run_until(kernel.now() + 1'000 * period);
    g_count_allocs.store(false);

    const std::uint64_t allocs = g_alloc_count.load();
    const std::uint64_t frames = agent.frames_emitted();
    std::ostringstream why;
    why << allocs << " allocations over " << frames << " frames";
    report("streaming path performs zero heap allocations across 1000 cycles",
           allocs == 0 && frames >= 900, why.str());
}

// ---------------------------------------------------------------------------
// 6. Protocol robustness: round trips, bit flips, transport search.
// ---------------------------------------------------------------------------

void criterion_protocol_robustness() {
    std::ostringstream why;
    bool ok = true;
    std::mt19937_64 rng(0xACCE57);

    // 1e5 randomized encode/decode round trips.
    for (int i = 0; i < 100'000 && ok; ++i) {
        vdl::proto::Frame f;
        switch (rng() % 4) {
            case 0: f.packet_type = vdl::proto::PacketType::Command; break;
            case 1: f.packet_type = vdl::proto::PacketType::Response; break;
            case 2: f.packet_type = vdl::proto::PacketType::Error; break;
            default:
                f.packet_type = vdl::proto::PacketType::DataAsync;
                f.channel_id = static_cast<std::uint8_t>(1 + rng() % 15);
                break;
        }
        f.payload.resize(rng() % 256);
        for (auto& b : f.payload) {
            b = static_cast<std::uint8_t>(rng());
        }
        auto wire = vdl::proto::encode_frame(f);
        if (!wire.ok()) {
            ok = false;
            why << "encode failed at iteration " << i << " ";
            break;
        }
        auto back = vdl::proto::decode_frame(*wire);
        if (!back.ok() || !(*back == f)) {
            ok = false;
            why << "round trip mismatch at iteration " << i << " ";
        }
    }

    // Exhaustive single-bit-flip rejection on a fixed frame.
    vdl::proto::Frame fixed;
    fixed.packet_type = vdl::proto::PacketType::Command;
    fixed.payload = {'{', '}'};
    auto wire = *vdl::proto::encode_frame(fixed);
    for (std::size_t byte = 0; byte < wire.size(); ++byte) {
        for (int bit = 0; bit < 8; ++bit) {
            auto mutated = wire;
            mutated[byte] ^= static_cast<std::uint8_t>(1u << bit);
            auto got = vdl::proto::decode_frame(mutated);
            if (got.ok() && *got == fixed) {
                ok = false;
                why << "bit flip " << byte << ":" << bit << " not detected ";
            }
        }
    }

    // Transport search to depth 8: over every sequence of the four
    // master/slave actions, the master never reaches two requests in
    // flight, and pipelined sends are always rejected.
    constexpr int kActions = 4;  // send, deliver response, enter/leave streaming
    constexpr int kDepth = 8;
    std::uint64_t sequences = 0;
    for (std::uint64_t code = 0; code < 65'536; ++code) {  // 4^8
        vdl::proto::TransportSession master(vdl::proto::Role::Master);
        vdl::proto::TransportSession slave(vdl::proto::Role::Slave);
        int outstanding = 0;
        std::uint64_t c = code;
        for (int step = 0; step < kDepth; ++step) {
            const int action = static_cast<int>(c % kActions);
            c /= kActions;
            switch (action) {
                case 0: {
                    auto sent = master.master_send_command({'{', '}'});
                    if (sent.ok()) {
                        ++outstanding;
                    } else if (sent.error() !=
                               vdl::proto::TransportError::PipelineViolation) {
                        ok = false;
                    }
                    break;
                }
                case 1:
                    master.master_on_response();
                    outstanding = 0;
                    break;
                case 2:
                    (void)slave.slave_enter_streaming();
                    (void)slave.slave_emit_data(1, {});
                    break;
                case 3:
                    slave.slave_leave_streaming();
                    break;
            }
            if (outstanding > 1) {
                ok = false;
                why << "double-outstanding request reached (sequence " << code << ") ";
                break;
            }
        }
        ++sequences;
        if (!ok) {
            break;
        }
    }
    if (sequences != 65'536 && ok) {
        ok = false;
        why << "search incomplete ";
    }
    report("codec round trips, exhaustive bit-flip rejection, depth-8 transport search",
           ok, why.str());
}

// ---------------------------------------------------------------------------
// 7. Architecture equivalence over 100 randomized command scripts.
// ---------------------------------------------------------------------------

struct SessionDigest {
    std::vector<std::string> transcript;          // "command|response|err"
    std::vector<std::string> channels;            // per-channel value streams
};

SessionDigest digest(const vdl::ctrl::SessionRecording& rec) {
    SessionDigest d;
    for (const auto& t : rec.transcript) {
        d.transcript.push_back(t.command + "|" + t.response + "|" +
                               (t.is_error ? "1" : "0"));
    }
    for (const auto& c : rec.channels) {
        std::ostringstream os;
        for (const auto& r : c.samples) {
            // timestamps excluded: only sequence numbers and payload values
            if (c.kind == vdl::data::SampleKind::Classifier) {
                os << r.seq << ':' << static_cast<unsigned>(r.sample.class_id) << ';';
            } else {
                os << r.seq << ':' << r.sample.x << ',' << r.sample.y << ',' << r.sample.z
                   << ';';
            }
        }
        d.channels.push_back(os.str());
    }
    return d;
}

void criterion_architecture_equivalence() {
    bool ok = true;
    std::ostringstream why;
    for (int script_no = 0; script_no < 100 && ok; ++script_no) {
        std::mt19937_64 rng(5'000 + script_no);
        std::vector<std::string> script;
        const bool two_sensors = (rng() % 2) == 0;
        // keep both architectures inside the keep-up regime so overruns
        // cannot differ between them
        const std::size_t max_idx = two_sensors ? 7 : 8;
        const std::uint32_t odr = vdl::data::kOdrLadder[rng() % (max_idx + 1)];
        script.push_back("{\"set_property\":{\"sensor\":\"acc\",\"enable\":true,\"odr\":" +
                         std::to_string(odr) + "}}");
        if (two_sensors) {
            script.push_back(
                "{\"set_property\":{\"sensor\":\"gyro\",\"enable\":true,\"odr\":" +
                std::to_string(odr) + "}}");
        }
        script.push_back("{\"start_log\":{}}");
        const int waits = 1 + static_cast<int>(rng() % 3);
        for (int w = 0; w < waits; ++w) {
            script.push_back("wait " + std::to_string(2 + rng() % 10));
            if (rng() % 3 == 0) {
                script.push_back("{\"get_status\":{}}");
            }
        }
        script.push_back("{\"stop_log\":{}}");

        vdl::bench::BenchConfig cfg;
        cfg.seed = 1 + script_no;
        auto cfg_a = vdl::bench::make_harness_config(vdl::agent::AgentMode::FsmLoop, cfg);
        auto cfg_b = vdl::bench::make_harness_config(vdl::agent::AgentMode::EventTasks, cfg);
        vdl::harness::SimHarness wa(cfg_a);
        vdl::harness::SimHarness wb(cfg_b);
        auto ra = wa.run_session(script);
        auto rb = wb.run_session(script);
        if (!ra.ok() || !rb.ok()) {
            ok = false;
            why << "script " << script_no << " failed to run ";
            break;
        }
        const auto da = digest(*ra);
        const auto db = digest(*rb);
        if (da.transcript != db.transcript) {
            ok = false;
            why << "script " << script_no << ": transcripts differ ";
        }
        if (da.channels != db.channels) {
            ok = false;
            why << "script " << script_no << ": channel payloads differ ";
        }
    }
    report("both architectures emit identical payload sequences over 100 random scripts",
           ok, why.str());
}

// ---------------------------------------------------------------------------
// 8. ELF parser vs an external tool, on our own binary and 3 fixtures.
// ---------------------------------------------------------------------------

void put16(std::vector<std::uint8_t>& v, std::size_t off, std::uint16_t x) {
    v[off] = x & 0xFF;
    v[off + 1] = x >> 8;
}
void put32(std::vector<std::uint8_t>& v, std::size_t off, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) {
        v[off + i] = (x >> (8 * i)) & 0xFF;
    }
}
void put64(std::vector<std::uint8_t>& v, std::size_t off, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        v[off + i] = (x >> (8 * i)) & 0xFF;
    }
}

/// Minimal little-endian ELF64 relocatable image with the given
/// (name, size, type) progbits/nobits sections, built byte by byte.
std::vector<std::uint8_t> build_fixture(
    const std::vector<std::tuple<std::string, std::uint64_t, std::uint32_t>>& sections) {
    std::string shstrtab("\0", 1);
    std::vector<std::size_t> name_off;
    for (const auto& [name, size, type] : sections) {
        name_off.push_back(shstrtab.size());
        shstrtab += name;
        shstrtab += '\0';
    }
    const std::size_t shstr_name = shstrtab.size();
    shstrtab += ".shstrtab";
    shstrtab += '\0';

    const std::size_t ehsize = 64, shentsize = 64;
    const std::size_t shstr_off = ehsize;
    std::size_t shoff = shstr_off + shstrtab.size();
    shoff = (shoff + 7) & ~std::size_t{7};
    const std::size_t shnum = sections.size() + 2;  // null + user + shstrtab

    std::vector<std::uint8_t> img(shoff + shnum * shentsize, 0);
    img[0] = 0x7F; img[1] = 'E'; img[2] = 'L'; img[3] = 'F';
    img[4] = 2;  // ELFCLASS64
    img[5] = 1;  // little-endian
    img[6] = 1;  // EV_CURRENT
    put16(img, 16, 1);                               // ET_REL
    put16(img, 18, 62);                              // EM_X86_64
    put32(img, 20, 1);                               // version
    put64(img, 40, shoff);                           // e_shoff
    put16(img, 52, static_cast<std::uint16_t>(ehsize));
    put16(img, 58, static_cast<std::uint16_t>(shentsize));
    put16(img, 60, static_cast<std::uint16_t>(shnum));
    put16(img, 62, static_cast<std::uint16_t>(shnum - 1));  // shstrndx
    std::memcpy(img.data() + shstr_off, shstrtab.data(), shstrtab.size());

    auto write_sh = [&](std::size_t idx, std::uint32_t name, std::uint32_t type,
                        std::uint64_t off, std::uint64_t size) {
        const std::size_t base = shoff + idx * shentsize;
        put32(img, base + 0, name);
        put32(img, base + 4, type);
        put64(img, base + 24, off);
        put64(img, base + 32, size);
    };
    for (std::size_t i = 0; i < sections.size(); ++i) {
        const auto& [name, size, type] = sections[i];
        // SHT_NOBITS sections occupy no file bytes; point others at offset 0
        // with their nominal size (the parser reads headers, not contents).
        write_sh(1 + i, static_cast<std::uint32_t>(name_off[i]), type, 0, size);
    }
    write_sh(shnum - 1, static_cast<std::uint32_t>(shstr_name), 3 /*SHT_STRTAB*/, shstr_off,
             shstrtab.size());
    return img;
}

std::map<std::string, std::uint64_t> readelf_sizes(const std::string& path) {
    std::map<std::string, std::uint64_t> out;
    const std::string cmd = "readelf -S -W " + path + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        return out;
    }
    char line[512];
    while (std::fgets(line, sizeof line, pipe)) {
        const char* bracket = std::strchr(line, ']');
        if (!bracket) {
            continue;
        }
        char name[128], type[64];
        unsigned long long addr = 0, off = 0, size = 0;
        if (std::sscanf(bracket + 1, "%127s %63s %llx %llx %llx", name, type, &addr, &off,
                        &size) == 5 &&
            name[0] == '.') {
            out[name] = size;
        }
    }
    pclose(pipe);
    return out;
}

bool sections_match(const std::string& path, std::ostringstream& why) {
    auto bytes = vdl::elf::read_file_bytes(path);
    if (!bytes.ok()) {
        why << "cannot read " << path << " ";
        return false;
    }
    auto parsed = vdl::elf::parse_elf_sections(*bytes);
    if (!parsed.ok()) {
        why << "parse failed for " << path << " ";
        return false;
    }
    auto oracle = readelf_sizes(path);
    if (oracle.empty()) {
        why << "readelf produced nothing for " << path << " ";
        return false;
    }
    std::map<std::string, std::uint64_t> ours;
    for (const auto& s : *parsed) {
        if (!s.name.empty() && s.name[0] == '.') {
            ours[s.name] = s.size;
        }
    }
    if (ours != oracle) {
        why << "section sizes disagree with readelf for " << path << " ";
        return false;
    }
    return true;
}

void criterion_elf_oracle() {
    std::ostringstream why;
    bool ok = true;
    const char* self = std::getenv("VDL_SELF_ELF");
    ok &= sections_match(self ? self : "/proc/self/exe", why);

    using Fixture = std::vector<std::tuple<std::string, std::uint64_t, std::uint32_t>>;
    const Fixture fixtures[3] = {
        {{".text", 0x1234, 1}, {".rodata", 0x200, 1}, {".bss", 0x4000, 8}},
        {{".text", 69'764, 1}, {".rodata", 14'336, 1}, {".data", 96, 1}, {".bss", 14'304, 8}},
        {{".text", 1, 1}},
    };
    for (int i = 0; i < 3; ++i) {
        const std::string path = "/tmp/vdl_fixture_" + std::to_string(i) + ".o";
        const auto img = build_fixture(fixtures[i]);
        FILE* f = std::fopen(path.c_str(), "wb");
        if (!f || std::fwrite(img.data(), 1, img.size(), f) != img.size()) {
            ok = false;
            why << "cannot write " << path << " ";
            if (f) std::fclose(f);
            continue;
        }
        std::fclose(f);
        ok &= sections_match(path, why);
        std::remove(path.c_str());
    }
    report("section sizes match readelf for our own binary and 3 built fixtures", ok,
           why.str());
}

// ---------------------------------------------------------------------------
// 9. Declared non-reproducibility of on-silicon measurements.
// ---------------------------------------------------------------------------

void criterion_declared_inputs() {
    // Absolute compiled-binary sizes and on-silicon latencies are properties
    // of external toolchains and hardware. They enter this artifact only as
    // report/preset inputs (presets/*.cfg, presets/iterations.csv) and are
    // never asserted against this artifact's own compilation output.
    report("binary sizes and on-silicon latencies are declared inputs, not outputs", true,
           "informational");
}

}  // namespace

int main() {
    criterion_trace_reproduction();
    criterion_deadline();
    criterion_task_switch();
    criterion_memory_table();
    criterion_zero_allocation();
    criterion_protocol_robustness();
    criterion_architecture_equivalence();
    criterion_elf_oracle();
    criterion_declared_inputs();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
