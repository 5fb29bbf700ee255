// vdlsim — command-line front end for the simulated sensor-logging stack.
//
// Subcommands:
//   trace               P0..P6 interval report for one streaming sensor
//   sweep               throughput and drop counts across the rate ladder
//   session             run a command script, export channel CSVs
//   serve-agent         expose a live simulated agent on a TCP byte stream
//   connect-controller  drive a served agent over TCP
//   footprint           ELF section/symbol accounting and ROM/RAM reports
//   report              render an iteration-history CSV as a data table
//
// Exit codes: 0 success, 2 usage/config error, 3 protocol or simulation
// error, 4 I/O error.

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "vdl/bench.hpp"
#include "vdl/config.hpp"
#include "vdl/controller.hpp"
#include "vdl/footprint.hpp"
#include "vdl/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitProtocol = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
    std::string config_path;
    std::string mode = "fsm";
    std::string format = "table";
};

int parse_mode(const std::string& s, vdl::agent::AgentMode& out) {
    if (s == "fsm") {
        out = vdl::agent::AgentMode::FsmLoop;
        return kExitOk;
    }
    if (s == "tasks") {
        out = vdl::agent::AgentMode::EventTasks;
        return kExitOk;
    }
    std::cerr << "error: --mode must be 'fsm' or 'tasks'\n";
    return kExitUsage;
}

int load_config(const std::string& path, vdl::bench::BenchConfig& out) {
    if (path.empty()) {
        out = vdl::bench::BenchConfig{};
        return kExitOk;
    }
    auto cfg = vdl::config::load_timing_config(path);
    if (!cfg.ok()) {
        std::cerr << "error: " << cfg.error().message << '\n';
        return cfg.error().message.rfind("cannot open", 0) == 0 ? kExitIo : kExitUsage;
    }
    out = *cfg;
    return kExitOk;
}

std::string fmt_hz(double hz) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", hz);
    return buf;
}

std::vector<std::string> read_script(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

int cmd_trace(const CommonOpts& opts, std::size_t cycles) {
    vdl::agent::AgentMode mode;
    if (int rc = parse_mode(opts.mode, mode); rc != kExitOk) {
        return rc;
    }
    vdl::bench::BenchConfig cfg;
    if (int rc = load_config(opts.config_path, cfg); rc != kExitOk) {
        return rc;
    }
    vdl::bench::TraceReport rep;
    try {
        rep = vdl::bench::run_trace(mode, cfg, cycles);
    } catch (const vdl::LogicError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitProtocol;
    }
    if (!rep.closure_ok) {
        std::cerr << "error: interval closure violated (max deviation "
                  << rep.closure_max_dev << " ns)\n";
        return kExitProtocol;
    }
    const std::pair<const char*, std::uint64_t> rows[] = {
        {"p0_period", rep.p0_ns},  {"p1_dispatch", rep.p1_ns},
        {"p2_bus", rep.p2_ns},     {"p3_serialize", rep.p3_ns},
        {"p4_uart_handoff", rep.p4_ns}, {"uart_kick", rep.uart_span_ns},
        {"p6_return", rep.p6_ns},  {"p5_idle", rep.p5_ns},
        {"busy", rep.busy_ns},
    };
    if (opts.format == "csv") {
        std::cout << "interval,ns\n";
        for (const auto& [name, ns] : rows) {
            std::cout << name << ',' << ns << '\n';
        }
        std::cout << "cycles," << rep.cycles << '\n';
    } else if (opts.format == "json") {
        std::cout << "{";
        for (const auto& [name, ns] : rows) {
            std::cout << '"' << name << "\":" << ns << ',';
        }
        std::cout << "\"cycles\":" << rep.cycles << "}\n";
    } else {
        std::printf("%-18s %12s %10s\n", "interval", "ns", "us");
        for (const auto& [name, ns] : rows) {
            std::printf("%-18s %12llu %10.3f\n", name,
                        static_cast<unsigned long long>(ns), rep.us(ns));
        }
        std::printf("cycles measured: %zu (closure exact)\n", rep.cycles);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const CommonOpts& opts, std::vector<std::uint32_t> odrs,
              std::uint64_t cycles) {
    vdl::agent::AgentMode mode;
    if (int rc = parse_mode(opts.mode, mode); rc != kExitOk) {
        return rc;
    }
    vdl::bench::BenchConfig cfg;
    if (int rc = load_config(opts.config_path, cfg); rc != kExitOk) {
        return rc;
    }
    if (odrs.empty()) {
        odrs.assign(std::begin(vdl::data::kOdrLadder), std::end(vdl::data::kOdrLadder));
    }
    vdl::bench::SweepResult result;
    try {
        result = vdl::bench::run_sweep(mode, cfg, odrs, cycles);
    } catch (const vdl::LogicError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;  // bad ODR request
    }
    const std::uint64_t busy = vdl::bench::busy_span_ns(mode, cfg.params);
    if (opts.format == "csv") {
        std::cout << "target_hz,achieved_hz,drops,busy_ns\n";
        for (const auto& pt : result.points) {
            std::cout << pt.target_hz << ',' << fmt_hz(pt.achieved_hz) << ',' << pt.drops
                      << ',' << busy << '\n';
        }
    } else if (opts.format == "json") {
        std::cout << "{\"busy_ns\":" << busy << ",\"points\":[";
        for (std::size_t i = 0; i < result.points.size(); ++i) {
            const auto& pt = result.points[i];
            std::cout << (i ? "," : "") << "{\"target_hz\":" << pt.target_hz
                      << ",\"achieved_hz\":" << fmt_hz(pt.achieved_hz)
                      << ",\"drops\":" << pt.drops << "}";
        }
        std::cout << "]}\n";
    } else {
        std::printf("busy span: %llu ns; ceiling: %u Hz\n",
                    static_cast<unsigned long long>(busy),
                    vdl::bench::max_sustainable_odr(cfg.params, mode, cfg.skew_num,
                                                    cfg.skew_den));
        std::printf("%10s %14s %8s\n", "target_hz", "achieved_hz", "drops");
        for (const auto& pt : result.points) {
            std::printf("%10u %14s %8llu\n", pt.target_hz, fmt_hz(pt.achieved_hz).c_str(),
                        static_cast<unsigned long long>(pt.drops));
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// session
// ---------------------------------------------------------------------------

int cmd_session(const CommonOpts& opts, const std::string& script_path,
                const std::string& out_dir) {
    vdl::agent::AgentMode mode;
    if (int rc = parse_mode(opts.mode, mode); rc != kExitOk) {
        return rc;
    }
    vdl::bench::BenchConfig cfg;
    if (int rc = load_config(opts.config_path, cfg); rc != kExitOk) {
        return rc;
    }
    std::vector<std::string> script;
    if (script_path == "-") {
        script = read_script(std::cin);
    } else {
        std::ifstream in(script_path);
        if (!in) {
            std::cerr << "error: cannot open script: " << script_path << '\n';
            return kExitIo;
        }
        script = read_script(in);
    }
    vdl::harness::SimHarness world(vdl::bench::make_harness_config(mode, cfg));
    auto rec = world.run_session(script);
    if (!rec.ok()) {
        std::cerr << "error: session failed: " << vdl::ctrl::to_string(rec.error()) << '\n';
        return kExitProtocol;
    }
    if (!out_dir.empty()) {
        try {
            vdl::ctrl::export_recording(*rec, out_dir);
        } catch (const vdl::IoError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitIo;
        }
    }
    if (opts.format == "csv") {
        std::cout << "command,response,is_error\n";
        for (const auto& t : rec->transcript) {
            std::cout << '"' << t.command << "\",\"" << t.response << "\","
                      << (t.is_error ? 1 : 0) << '\n';
        }
    } else if (opts.format == "json") {
        std::cout << "{\"transcript\":[";
        for (std::size_t i = 0; i < rec->transcript.size(); ++i) {
            const auto& t = rec->transcript[i];
            std::cout << (i ? "," : "") << "{\"command\":" << t.command
                      << ",\"response\":" << (t.response.empty() ? "null" : t.response)
                      << ",\"is_error\":" << (t.is_error ? "true" : "false") << "}";
        }
        std::cout << "],\"gaps\":" << rec->total_gaps() << "}\n";
    } else {
        for (const auto& t : rec->transcript) {
            std::cout << (t.is_error ? "ERR " : "OK  ") << t.command << " -> " << t.response
                      << '\n';
        }
        for (const auto& c : rec->channels) {
            if (!c.samples.empty()) {
                std::cout << "channel " << static_cast<int>(c.channel_id) << ": "
                          << c.samples.size() << " samples, " << c.gap_count << " gaps\n";
            }
        }
    }
    // A session with failed commands is still exit 0: the transcript records
    // agent-side errors. Transport-level failure returned 3 above.
    return kExitOk;
}

// ---------------------------------------------------------------------------
// serve-agent / connect-controller: TCP byte-stream bridge
// ---------------------------------------------------------------------------

int cmd_serve_agent(const CommonOpts& opts, std::uint16_t port) {
    vdl::agent::AgentMode mode;
    if (int rc = parse_mode(opts.mode, mode); rc != kExitOk) {
        return rc;
    }
    vdl::bench::BenchConfig cfg;
    if (int rc = load_config(opts.config_path, cfg); rc != kExitOk) {
        return rc;
    }

    const int server = socket(AF_INET, SOCK_STREAM, 0);
    if (server < 0) {
        std::perror("socket");
        return kExitIo;
    }
    const int one = 1;
    setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
        listen(server, 1) < 0) {
        std::perror("bind/listen");
        close(server);
        return kExitIo;
    }
    std::cerr << "serve-agent: listening on 127.0.0.1:" << port << '\n';
    const int fd = accept(server, nullptr, nullptr);
    close(server);
    if (fd < 0) {
        std::perror("accept");
        return kExitIo;
    }
    std::cerr << "serve-agent: controller connected\n";

    // A simulated world identical to the in-process harness, but outbound
    // agent bytes go to the socket. Simulated time tracks wall time.
    auto hcfg = vdl::bench::make_harness_config(mode, cfg);
    vdl::sim::Kernel kernel(hcfg.reserve_events);
    std::vector<vdl::sensor::VirtualSensor> sensors;
    for (std::size_t i = 0; i < hcfg.model.sensors.size(); ++i) {
        sensors.emplace_back(static_cast<std::uint32_t>(i), hcfg.model.sensors[i],
                             hcfg.sensor_seed + i, hcfg.skew_num, hcfg.skew_den);
    }
    vdl::sim::UartLink tx_link(1 << 20);
    vdl::agent::Agent agent(mode, kernel, sensors, tx_link, hcfg.model, hcfg.params);

    bool write_failed = false;
    kernel.set_dispatcher([&](const vdl::sim::SimEvent& ev) {
        switch (ev.kind) {
            case vdl::sim::EventKind::SensorDrdy: {
                auto& s = sensors[ev.a];
                if (agent.state() == vdl::agent::FsmState::Streaming &&
                    s.config().enabled) {
                    s.on_drdy();
                    (void)agent.on_drdy_interrupt(static_cast<std::uint32_t>(ev.a), ev.at);
                    (void)s.tick_drdy(kernel, ev.at);
                }
                break;
            }
            case vdl::sim::EventKind::UartTxDone: {
                auto bytes = tx_link.next_transmission();
                std::size_t off = 0;
                while (off < bytes.size()) {
                    const ssize_t n = write(fd, bytes.data() + off, bytes.size() - off);
                    if (n <= 0) {
                        write_failed = true;
                        break;
                    }
                    off += static_cast<std::size_t>(n);
                }
                break;
            }
            default:
                agent.on_event(ev);
                break;
        }
    });

    const auto t0 = std::chrono::steady_clock::now();
    std::uint8_t buf[4096];
    for (;;) {
        pollfd pfd{fd, POLLIN, 0};
        const int pr = poll(&pfd, 1, 5 /*ms*/);
        if (pr < 0) {
            std::perror("poll");
            close(fd);
            return kExitIo;
        }
        const auto wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        if (pr > 0 && (pfd.revents & POLLIN) != 0) {
            const ssize_t n = read(fd, buf, sizeof buf);
            if (n <= 0) {
                break;  // peer closed
            }
            agent.on_rx_bytes({buf, static_cast<std::size_t>(n)},
                              std::max<vdl::sim::SimTime>(kernel.now(),
                                                          static_cast<std::uint64_t>(wall)));
        }
        kernel.run_until(static_cast<std::uint64_t>(wall));
        if (write_failed) {
            break;
        }
    }
    close(fd);
    std::cerr << "serve-agent: connection closed\n";
    return kExitOk;
}

int cmd_connect_controller(const std::string& host,
                           std::uint16_t port, const std::string& script_path,
                           const std::string& out_dir) {
    const int fd = socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        std::perror("socket");
        return kExitIo;
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        std::cerr << "error: bad host address: " << host << '\n';
        close(fd);
        return kExitUsage;
    }
    if (connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
        std::perror("connect");
        close(fd);
        return kExitIo;
    }

    std::vector<std::string> script;
    if (script_path.empty() || script_path == "-") {
        script = read_script(std::cin);
    } else {
        std::ifstream in(script_path);
        if (!in) {
            std::cerr << "error: cannot open script: " << script_path << '\n';
            close(fd);
            return kExitIo;
        }
        script = read_script(in);
    }

    vdl::ctrl::Controller controller(vdl::data::default_device_model());
    std::uint8_t buf[4096];
    auto pump = [&](int timeout_ms) -> bool {
        pollfd pfd{fd, POLLIN, 0};
        const int pr = poll(&pfd, 1, timeout_ms);
        if (pr <= 0) {
            return pr == 0;
        }
        const ssize_t n = read(fd, buf, sizeof buf);
        if (n <= 0) {
            return false;
        }
        controller.on_rx_bytes({buf, static_cast<std::size_t>(n)});
        return true;
    };

    for (const auto& line : script) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.rfind("wait ", 0) == 0) {
            // In bridged mode `wait n` pauses n milliseconds of wall time
            // while still draining inbound data frames.
            const long ms = std::strtol(line.c_str() + 5, nullptr, 10);
            const auto until = std::chrono::steady_clock::now() +
                               std::chrono::milliseconds(ms);
            while (std::chrono::steady_clock::now() < until) {
                if (!pump(5)) {
                    break;
                }
            }
            continue;
        }
        auto bytes = controller.make_command(line);
        if (!bytes.ok()) {
            std::cerr << "error: " << vdl::ctrl::to_string(bytes.error()) << '\n';
            close(fd);
            return kExitProtocol;
        }
        std::size_t off = 0;
        while (off < bytes->size()) {
            const ssize_t n = write(fd, bytes->data() + off, bytes->size() - off);
            if (n <= 0) {
                std::perror("write");
                close(fd);
                return kExitIo;
            }
            off += static_cast<std::size_t>(n);
        }
        // Wait for the response (5 s wall-clock budget).
        const std::uint64_t before = controller.responses_received();
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
        while (controller.responses_received() == before) {
            if (std::chrono::steady_clock::now() > deadline) {
                std::cerr << "error: response timeout\n";
                close(fd);
                return kExitProtocol;
            }
            if (!pump(50)) {
                break;
            }
        }
        const auto& t = controller.recording().transcript.back();
        std::cout << (t.is_error ? "ERR " : "OK  ") << t.command << " -> " << t.response
                  << std::endl;
    }
    close(fd);

    const auto& rec = controller.recording();
    for (const auto& c : rec.channels) {
        if (!c.samples.empty()) {
            std::cout << "channel " << static_cast<int>(c.channel_id) << ": "
                      << c.samples.size() << " samples, " << c.gap_count << " gaps\n";
        }
    }
    if (!out_dir.empty()) {
        try {
            vdl::ctrl::export_recording(rec, out_dir);
        } catch (const vdl::IoError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitIo;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// footprint
// ---------------------------------------------------------------------------

int cmd_footprint(const CommonOpts& opts, std::string path, const std::string& rules_path,
                  std::uint64_t stack, std::uint64_t heap, std::int64_t quoted_ram) {
    if (path == "self") {
        path = "/proc/self/exe";
    }
    auto bytes = vdl::elf::read_file_bytes(path);
    if (!bytes.ok()) {
        std::cerr << "error: cannot read: " << path << '\n';
        return kExitIo;
    }
    auto secs = vdl::elf::parse_elf_sections(*bytes);
    if (!secs.ok()) {
        std::cerr << "error: " << vdl::elf::to_string(secs.error()) << ": " << path << '\n';
        return kExitProtocol;
    }
    const auto report = vdl::elf::build_memory_report(*secs, stack, heap, quoted_ram);

    if (!rules_path.empty()) {
        std::ifstream rin(rules_path);
        if (!rin) {
            std::cerr << "error: cannot open rules: " << rules_path << '\n';
            return kExitIo;
        }
        auto rules = vdl::elf::parse_rules(rin);
        if (!rules.ok() || rules->empty()) {
            std::cerr << "error: malformed rules file: " << rules_path << '\n';
            return kExitUsage;
        }
        auto syms = vdl::elf::parse_elf_symbols(*bytes);
        if (!syms.ok()) {
            std::cerr << "error: " << vdl::elf::to_string(syms.error()) << '\n';
            return kExitProtocol;
        }
        const auto bd = vdl::elf::categorize(*syms, *rules);
        std::cout << vdl::elf::breakdown_csv(bd);
        return kExitOk;
    }

    if (opts.format == "csv") {
        std::cout << "metric,bytes\n"
                  << "text," << report.text << '\n'
                  << "rodata," << report.rodata << '\n'
                  << "total_rom," << report.total_rom << '\n'
                  << "stack," << report.stack << '\n'
                  << "static," << report.static_ram << '\n'
                  << "heap," << report.heap << '\n'
                  << "total_ram," << report.total_ram << '\n';
        if (report.quoted_total_ram >= 0) {
            std::cout << "quoted_total_ram," << report.quoted_total_ram << '\n';
        }
    } else if (opts.format == "json") {
        std::cout << "{\"text\":" << report.text << ",\"rodata\":" << report.rodata
                  << ",\"total_rom\":" << report.total_rom << ",\"stack\":" << report.stack
                  << ",\"static\":" << report.static_ram << ",\"heap\":" << report.heap
                  << ",\"total_ram\":" << report.total_ram;
        if (report.quoted_total_ram >= 0) {
            std::cout << ",\"quoted_total_ram\":" << report.quoted_total_ram;
        }
        std::cout << "}\n";
    } else {
        std::cout << vdl::elf::memory_table(report, nullptr, path);
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// report: render series,step,metric,value[,unit] CSV as grouped tables
// ---------------------------------------------------------------------------

int cmd_report(const CommonOpts& opts, const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "error: cannot open: " << csv_path << '\n';
        return kExitIo;
    }
    struct Row {
        std::string series, step, metric, value, unit;
    };
    std::vector<Row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (first) {
            first = false;
            if (!cells.empty() && cells[0] == "series") {
                continue;  // header
            }
        }
        if (cells.size() < 4) {
            std::cerr << "error: malformed row (need series,step,metric,value[,unit]): "
                      << line << '\n';
            return kExitUsage;
        }
        rows.push_back({cells[0], cells[1], cells[2], cells[3],
                        cells.size() > 4 ? cells[4] : ""});
    }
    if (opts.format == "csv") {
        std::cout << "series,step,metric,value,unit\n";
        for (const auto& r : rows) {
            std::cout << r.series << ',' << r.step << ',' << r.metric << ',' << r.value
                      << ',' << r.unit << '\n';
        }
        return kExitOk;
    }
    if (opts.format == "json") {
        std::cout << "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            std::cout << (i ? "," : "") << "{\"series\":\"" << r.series << "\",\"step\":\""
                      << r.step << "\",\"metric\":\"" << r.metric << "\",\"value\":"
                      << r.value << ",\"unit\":\"" << r.unit << "\"}";
        }
        std::cout << "]\n";
        return kExitOk;
    }
    // Group by metric, one table per metric.
    std::map<std::string, std::vector<const Row*>> by_metric;
    for (const auto& r : rows) {
        by_metric[r.metric].push_back(&r);
    }
    for (const auto& [metric, group] : by_metric) {
        std::cout << metric << (group.front()->unit.empty()
                                    ? std::string{}
                                    : " (" + group.front()->unit + ")")
                  << '\n';
        for (const auto* r : group) {
            std::printf("  %-10s %-18s %12s\n", r->series.c_str(), r->step.c_str(),
                        r->value.c_str());
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vdlsim — simulated sensor-logging stack tools"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto add_common = [&](CLI::App* sub, bool with_mode = true) {
        sub->add_option("--config", opts.config_path, "timing config file (key = value)");
        sub->add_option("--format", opts.format, "output format: table|csv|json")
            ->check(CLI::IsMember({"table", "csv", "json"}));
        if (with_mode) {
            sub->add_option("--mode", opts.mode, "agent architecture: fsm|tasks")
                ->check(CLI::IsMember({"fsm", "tasks"}));
        }
    };

    // trace
    std::size_t trace_cycles = 50;
    auto* trace = app.add_subcommand("trace", "interval report for one streaming sensor");
    add_common(trace);
    trace->add_option("--cycles", trace_cycles, "cycles to measure");

    // sweep
    std::vector<std::uint32_t> sweep_odrs;
    std::uint64_t sweep_cycles = 2000;
    auto* sweep = app.add_subcommand("sweep", "throughput/drops across the rate ladder");
    add_common(sweep);
    sweep->add_option("--odr", sweep_odrs, "rates to test (default: full ladder)");
    sweep->add_option("--cycles", sweep_cycles, "interrupt periods per rate");

    // session
    std::string session_script = "-";
    std::string session_out;
    auto* session = app.add_subcommand("session", "run a command script");
    add_common(session);
    session->add_option("--script", session_script, "script file ('-' for stdin)");
    session->add_option("--out", session_out, "directory for channel CSV export");

    // serve-agent
    std::uint16_t serve_port = 9807;
    auto* serve = app.add_subcommand("serve-agent", "expose a live agent on TCP");
    add_common(serve);
    serve->add_option("--port", serve_port, "TCP port on 127.0.0.1");

    // connect-controller
    std::string conn_host = "127.0.0.1";
    std::uint16_t conn_port = 9807;
    std::string conn_script;
    std::string conn_out;
    auto* conn = app.add_subcommand("connect-controller", "drive a served agent over TCP");
    conn->add_option("--host", conn_host, "server address");
    conn->add_option("--port", conn_port, "server port");
    conn->add_option("--script", conn_script, "script file (default: stdin)");
    conn->add_option("--out", conn_out, "directory for channel CSV export");

    // footprint
    std::string fp_path;
    std::string fp_rules;
    std::uint64_t fp_stack = 0, fp_heap = 0;
    std::int64_t fp_quoted = -1;
    auto* footprint = app.add_subcommand("footprint", "ELF ROM/RAM accounting");
    add_common(footprint, /*with_mode=*/false);
    footprint->add_option("elf", fp_path, "ELF path, or 'self'")->required();
    footprint->add_option("--rules", fp_rules, "symbol categorization rules file");
    footprint->add_option("--stack", fp_stack, "stack bytes (RAM report input)");
    footprint->add_option("--heap", fp_heap, "heap bytes (RAM report input)");
    footprint->add_option("--quoted-ram", fp_quoted, "externally quoted RAM total");

    // report
    std::string report_csv;
    auto* report = app.add_subcommand("report", "render an iteration-history CSV");
    add_common(report, /*with_mode=*/false);
    report->add_option("csv", report_csv, "series,step,metric,value[,unit] CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help/usage text
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (trace->parsed()) {
            return cmd_trace(opts, trace_cycles);
        }
        if (sweep->parsed()) {
            return cmd_sweep(opts, sweep_odrs, sweep_cycles);
        }
        if (session->parsed()) {
            return cmd_session(opts, session_script, session_out);
        }
        if (serve->parsed()) {
            return cmd_serve_agent(opts, serve_port);
        }
        if (conn->parsed()) {
            return cmd_connect_controller(conn_host, conn_port, conn_script, conn_out);
        }
        if (footprint->parsed()) {
            return cmd_footprint(opts, fp_path, fp_rules, fp_stack, fp_heap, fp_quoted);
        }
        if (report->parsed()) {
            return cmd_report(opts, report_csv);
        }
    } catch (const vdl::LogicError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitProtocol;
    } catch (const vdl::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
