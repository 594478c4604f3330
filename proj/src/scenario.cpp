#include "gfrsim/scenario.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gfrsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail("unknown key \"" + (section.empty() ? it.key() : section + "." + it.key()) +
                 "\" in scenario document");
    }
}

template <typename T>
T get_num(const json& obj, const std::string& section, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail("key \"" + section + "." + key + "\" must be a number");
    return v.get<T>();
}

std::string get_str(const json& obj, const std::string& section, const std::string& key,
                    const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail("key \"" + section + "." + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace

ScenarioDocument ScenarioDocument::from_json_text(const std::string& text) {
    json root = json::parse(text);  // throws json::parse_error on bad syntax
    if (!root.is_object()) fail("scenario document must be a JSON object");
    check_keys(root, "", {"topology", "tcp", "gfr", "run"});

    ScenarioDocument doc;

    if (root.contains("topology")) {
        const json& t = root.at("topology");
        if (!t.is_object()) fail("\"topology\" must be an object");
        check_keys(t, "topology", {"n_sources", "link_bandwidth_bps", "link_delay_ms",
                                   "buffer_cells"});
        doc.n_sources = get_num<std::uint32_t>(t, "topology", "n_sources", doc.n_sources);
        doc.link_bandwidth_bps =
            get_num<double>(t, "topology", "link_bandwidth_bps", doc.link_bandwidth_bps);
        doc.link_delay_ms = get_num<double>(t, "topology", "link_delay_ms", doc.link_delay_ms);
        doc.buffer_cells = get_num<std::uint64_t>(t, "topology", "buffer_cells", doc.buffer_cells);
    }
    if (root.contains("tcp")) {
        const json& t = root.at("tcp");
        if (!t.is_object()) fail("\"tcp\" must be an object");
        check_keys(t, "tcp", {"mss_bytes", "rcv_wnd_bytes", "timer_granularity_ms"});
        doc.mss_bytes = get_num<std::uint32_t>(t, "tcp", "mss_bytes", doc.mss_bytes);
        doc.rcv_wnd_bytes = get_num<std::uint64_t>(t, "tcp", "rcv_wnd_bytes", doc.rcv_wnd_bytes);
        doc.timer_granularity_ms =
            get_num<std::uint32_t>(t, "tcp", "timer_granularity_ms", doc.timer_granularity_ms);
    }
    if (root.contains("gfr")) {
        const json& g = root.at("gfr");
        if (!g.is_object()) fail("\"gfr\" must be an object");
        check_keys(g, "gfr", {"allocation", "tagging", "buffer_policy", "r", "z", "scheduler"});
        if (g.contains("allocation")) {
            const json& a = g.at("allocation");
            if (a.is_string()) {
                doc.allocation = a.get<std::string>();
            } else if (a.is_array()) {
                doc.allocation = "explicit";
                for (const json& v : a) {
                    if (!v.is_number()) fail("gfr.allocation entries must be numbers (bits/s)");
                    doc.explicit_alloc_bps.push_back(v.get<double>());
                }
            } else {
                fail("gfr.allocation must be a string or an array of rates");
            }
        }
        doc.tagging = get_str(g, "gfr", "tagging", doc.tagging);
        doc.buffer_policy = get_str(g, "gfr", "buffer_policy", doc.buffer_policy);
        if (g.contains("r")) doc.r = get_num<double>(g, "gfr", "r", 0.0);
        if (g.contains("z")) doc.z = get_num<double>(g, "gfr", "z", 0.0);
        doc.scheduler = get_str(g, "gfr", "scheduler", doc.scheduler);
    }
    if (root.contains("run")) {
        const json& r = root.at("run");
        if (!r.is_object()) fail("\"run\" must be an object");
        check_keys(r, "run", {"duration_s", "seed", "warmup_s"});
        doc.duration_s = get_num<double>(r, "run", "duration_s", doc.duration_s);
        doc.seed = get_num<std::uint64_t>(r, "run", "seed", doc.seed);
        doc.warmup_s = get_num<double>(r, "run", "warmup_s", doc.warmup_s);
    }
    return doc;
}

ScenarioDocument ScenarioDocument::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

double ScenarioDocument::resolved_r() const {
    if (r) return *r;
    if (buffer_policy == "wba") return 0.5;
    return 0.9;  // selective and epd default
}

double ScenarioDocument::resolved_z() const {
    if (z) return *z;
    if (buffer_policy == "wba") return 1.0;
    return 0.8;
}

std::string ScenarioDocument::canonical_json() const {
    json g = {{"allocation", allocation},
              {"tagging", tagging},
              {"buffer_policy", buffer_policy},
              {"r", resolved_r()},
              {"z", resolved_z()},
              {"scheduler", scheduler}};
    if (allocation == "explicit") g["allocation"] = explicit_alloc_bps;
    json root = {
        {"topology",
         {{"n_sources", n_sources},
          {"link_bandwidth_bps", link_bandwidth_bps},
          {"link_delay_ms", link_delay_ms},
          {"buffer_cells", buffer_cells}}},
        {"tcp",
         {{"mss_bytes", mss_bytes},
          {"rcv_wnd_bytes", rcv_wnd_bytes},
          {"timer_granularity_ms", timer_granularity_ms}}},
        {"gfr", g},
        {"run", {{"duration_s", duration_s}, {"seed", seed}, {"warmup_s", warmup_s}}},
    };
    return root.dump();  // object keys serialize sorted
}

std::uint64_t ScenarioDocument::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical_json()) h = (h ^ c) * 1099511628211ull;
    return h;
}

SimConfig ScenarioDocument::to_sim_config() const {
    if (n_sources == 0) fail("topology.n_sources must be positive");
    if (link_bandwidth_bps <= 0.0) fail("topology.link_bandwidth_bps must be positive");
    if (link_delay_ms < 0.0) fail("topology.link_delay_ms must be non-negative");
    if (buffer_cells == 0) fail("topology.buffer_cells must be positive");
    if (mss_bytes == 0) fail("tcp.mss_bytes must be positive");
    if (rcv_wnd_bytes < mss_bytes) fail("tcp.rcv_wnd_bytes must cover at least one segment");
    if (timer_granularity_ms == 0) fail("tcp.timer_granularity_ms must be positive");
    if (duration_s <= 0.0) fail("run.duration_s must be positive");
    if (warmup_s < 0.0 || warmup_s >= duration_s) fail("run.warmup_s must lie inside the run");

    SimConfig cfg;
    cfg.n_sources = n_sources;
    cfg.link_bandwidth_bps = link_bandwidth_bps;
    cfg.link_delay = from_sec(link_delay_ms * 1e-3);
    cfg.buffer_cells = buffer_cells;
    cfg.tcp.mss = mss_bytes;
    cfg.tcp.rcv_wnd = rcv_wnd_bytes;
    cfg.tcp.timer_granularity = from_ms(timer_granularity_ms);
    cfg.tcp.min_rto = 2 * cfg.tcp.timer_granularity;
    cfg.duration = from_sec(duration_s);
    cfg.warmup = from_sec(warmup_s);
    cfg.seed = seed;

    if (tagging == "off") cfg.tagging = TaggingMode::Off;
    else if (tagging == "tag") cfg.tagging = TaggingMode::Tag;
    else if (tagging == "drop") cfg.tagging = TaggingMode::Drop;
    else fail("gfr.tagging must be one of off|tag|drop");

    if (buffer_policy == "tail") cfg.policy.kind = DropPolicyKind::TailDrop;
    else if (buffer_policy == "epd") cfg.policy.kind = DropPolicyKind::Epd;
    else if (buffer_policy == "selective") cfg.policy.kind = DropPolicyKind::SelectiveDrop;
    else if (buffer_policy == "wba") cfg.policy.kind = DropPolicyKind::Wba;
    else fail("gfr.buffer_policy must be one of tail|epd|selective|wba");

    cfg.policy.r_fraction = resolved_r();
    cfg.policy.z = resolved_z();
    if (cfg.policy.r_fraction < 0.0 || cfg.policy.r_fraction > 1.0)
        fail("gfr.r must lie in [0, 1] (fraction of the buffer)");
    if (cfg.policy.z < 0.0 || cfg.policy.z > 1.0) fail("gfr.z must lie in [0, 1]");

    if (scheduler == "fifo") cfg.sched = SchedulerKind::Fifo;
    else if (scheduler == "wfq") cfg.sched = SchedulerKind::Wfq;
    else fail("gfr.scheduler must be one of fifo|wfq");

    if (allocation == "equal") cfg.vcs = equal_allocation(cfg);
    else if (allocation == "unequal-5-groups") cfg.vcs = unequal_five_groups(cfg);
    else if (allocation == "explicit") cfg.vcs = explicit_allocation(cfg, explicit_alloc_bps);
    else fail("gfr.allocation must be equal, unequal-5-groups, or a rate list");

    validate_allocations(cfg);
    return cfg;
}

}  // namespace gfrsim
