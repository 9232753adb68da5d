#include "fedsched/simulator.hpp"

#include "fedsched/errors.hpp"

#include <algorithm>

namespace fedsched {

namespace {

bool is_background(EventKind k) {
    return k == EventKind::HeartbeatTick || k == EventKind::RebalanceTick || k == EventKind::AggregateReport;
}

} // namespace

Simulator::Simulator(RunConfig config, std::uint64_t seed)
    : config_(std::move(config))
    , engine_(seed) {
    config_.validate();
    pending_conflicts_ = config_.faults.bind_conflicts;

    for (const auto& cc : config_.clusters) {
        ClusterRuntime c;
        c.state = std::make_unique<ClusterState>(cc.spec);
        c.pipeline = cc.pipeline;
        c.metascale = cc.metascale;
        clusters_.emplace(cc.spec.cluster_id, std::move(c));
    }
    for (const auto& e : config_.graph.edges()) {
        // Federation setup hands the source an initial, exact aggregate.
        virtual_nodes_[e.source][e.target] = VirtualNode{e.source, e.target, rt(e.target).state->aggregate(), 0};
    }

    LogRecord setup{0, 0, "Setup", nlohmann::ordered_json{{"seed", seed}}, {}};
    current_ = &setup;
    for (const auto& [id, c] : clusters_)
        for (const auto& n : c.state->nodes()) pool_effect(id, n);
    current_ = nullptr;
    metrics_.record(setup);
    log_.push_back(std::move(setup));

    for (const auto& sub : config_.scenario.pods) {
        PodRuntime p{sub.pod, sub.cluster, false};
        p.spec.phase = PodPhase::Pending;
        p.spec.placement.reset();
        const auto id = p.spec.pod_id;
        const auto at = p.spec.submit_time;
        pods_.emplace(id, std::move(p));
        schedule(at, ev::PodSubmit{id, sub.cluster});
    }
    for (const auto& sub : config_.scenario.jobs) {
        jobs_.emplace(sub.job.job_id, JobRuntime{sub.job, sub.cluster});
        schedule(sub.job.submit_time, ev::BatchJobSubmit{sub.job.job_id});
    }
    if (const auto& wf = config_.scenario.wildfire)
        for (const auto& reading : wf->trace) schedule(reading.time, ev::SensorMessage{reading});

    if (config_.graph.edge_count() > 0 && config_.federation.heartbeat > 0)
        schedule(config_.federation.heartbeat, ev::HeartbeatTick{});
    for (const auto& [id, c] : clusters_)
        if (c.metascale) schedule(config_.metascale.tick, ev::RebalanceTick{id});
}

// ---------------------------------------------------------------------------
// Plumbing

void Simulator::emit(Effect e) {
    if (!current_) throw InvariantViolation("state change outside of event processing");
    current_->effects.push_back(std::move(e));
}

void Simulator::schedule(TimeMs at, EventPayload p) {
    if (!is_background(kind_of(p))) ++foreground_events_;
    engine_.schedule(at, std::move(p));
}

void Simulator::send(const std::string& subject, const ClusterId& from, const ClusterId& to, EventPayload p) {
    // Replies travel over the same edge as the request.
    const auto& edge = config_.graph.has_edge(from, to) ? config_.graph.edge(from, to) : config_.graph.edge(to, from);
    if (!is_background(kind_of(p))) ++foreground_events_;
    engine_.deliver(ChannelKey{subject, from, to}, edge.latency, std::move(p));
}

bool Simulator::busy() const {
    if (foreground_events_ > 0) return true;
    for (const auto& [_, c] : clusters_) {
        if (!c.pending.empty()) return true;
        for (const auto& j : c.job_queue)
            if (jobs_.at(j).job.state == JobState::Queued) return true;
    }
    return false;
}

Simulator::ClusterRuntime& Simulator::rt(const ClusterId& id) {
    auto it = clusters_.find(id);
    if (it == clusters_.end()) throw UnknownCluster("unknown cluster '" + id + "'");
    return it->second;
}

Simulator::PodRuntime& Simulator::pod_rt(const PodId& id) {
    auto it = pods_.find(id);
    if (it == pods_.end()) throw InvariantViolation("unknown pod '" + id + "'");
    return it->second;
}

bool Simulator::done() const {
    return engine_.empty() || engine_.peek().time > config_.sim.duration;
}

void Simulator::run() {
    while (!done()) step();
}

Event Simulator::step() {
    Event e = engine_.step();
    if (!is_background(e.kind())) --foreground_events_;
    LogRecord rec{e.time, e.seq, std::string(to_string(e.kind())), payload_to_json(e.payload), {}};
    current_ = &rec;
    dispatch(e);
    current_ = nullptr;
    if (config_.sim.check_invariants) check_invariants();
    metrics_.record(rec);
    log_.push_back(std::move(rec));
    return e;
}

void Simulator::dispatch(const Event& e) {
    std::visit([this](const auto& payload) { on(payload); }, e.payload);
}

void Simulator::pool_effect(const ClusterId& cluster, const NodeSpec& n) {
    emit(fx::Pool{cluster, n.node_id, n.pool, n.state, n.capacity});
}

void Simulator::set_phase(PodRuntime& p, PodPhase to) {
    const auto from = p.spec.phase;
    advance_phase(p.spec, to);
    emit(fx::Phase{p.spec.pod_id, from, to});
}

void Simulator::start_workload(PodRuntime& p, const ClusterId& cluster, const NodeId& node, bool delegated) {
    auto& c = rt(cluster);
    const auto completes = bind(p.spec, *c.state, node, now());
    emit(fx::Phase{p.spec.pod_id, PodPhase::Pending, PodPhase::Bound});
    emit(fx::Bound{p.spec.pod_id, p.source, cluster, node, p.spec.request, delegated});
    set_phase(p, PodPhase::Running);
    schedule(completes, ev::PodComplete{p.spec.pod_id, cluster});
}

void Simulator::push_aggregates(const ClusterId& target) {
    const auto agg = rt(target).state->aggregate();
    for (const auto& source : config_.graph.sources_of(target))
        send("aggregate", target, source, ev::AggregateReport{source, target, agg});
}

// ---------------------------------------------------------------------------
// Local and candidate scheduling

void Simulator::try_schedule(const ClusterId& cluster) {
    auto& c = rt(cluster);
    if (c.pending.empty()) return;
    auto snap = SchedulingSnapshot::of(*c.state);
    bool bound_any = false;

    for (auto it = c.pending.begin(); it != c.pending.end();) {
        if (!it->chaperon) {
            auto& p = pod_rt(it->pod);
            if (auto node = schedule_one(p.spec, snap, c.pipeline)) {
                start_workload(p, cluster, *node, false);
                bound_any = true;
                it = c.pending.erase(it);
                snap = SchedulingSnapshot::of(*c.state);
                continue;
            }
            ++it;
            continue;
        }

        auto& ch = c.chaperons.at(it->pod);
        auto outcome = candidate_schedule(ch, snap, c.pipeline);
        if (outcome.chaperon.state == ChaperonState::CandidateReserved) {
            if (config_.federation.reservations) {
                c.state->reserve(ch.pod, *outcome.chaperon.reserved_node);
                emit(fx::Reserved{ch.pod.pod_id, cluster, *outcome.chaperon.reserved_node, ch.pod.request});
                snap = SchedulingSnapshot::of(*c.state);
            }
            ch = std::move(outcome.chaperon);
            emit(fx::Chaperon{ch.pod.pod_id, cluster, ch.state});
            it = c.pending.erase(it);
        } else {
            ch = std::move(outcome.chaperon);
            ++it;
        }
        if (outcome.changed && !config_.faults.drop_reports.contains({ch.source, cluster}))
            send(ch.pod.pod_id, cluster, ch.source,
                 ev::CandidateReport{ch.pod.pod_id, ch.source, cluster, outcome.report.status, outcome.report.score});
    }
    if (bound_any) push_aggregates(cluster);
}

void Simulator::release_chaperon(ClusterRuntime& c, PodChaperon& ch) {
    if (ch.state == ChaperonState::CandidateReserved && config_.federation.reservations) {
        const auto* h = c.state->hold(ch.pod.pod_id);
        if (!h || h->kind != HoldKind::Reserved)
            throw InvariantViolation("reserved chaperon " + ch.pod.pod_id + " holds nothing in " + ch.target);
        emit(fx::Unreserved{ch.pod.pod_id, ch.target, h->node, h->request});
        c.state->release_reservation(ch.pod.pod_id);
    }
    ch.reserved_node.reset();
}

// ---------------------------------------------------------------------------
// Event handlers

void Simulator::on(const ev::PodSubmit& e) {
    auto& p = pod_rt(e.pod);
    emit(fx::Submitted{p.spec.pod_id, p.spec.ns, p.source, p.spec.federation_eligible, p.spec.request});

    std::optional<FederationPlan> plan;
    try {
        plan = federate_pod(p.spec, p.source, config_.graph);
    } catch (const NoTargets&) {
        plan.reset();  // no targets: schedule like a regular local pod
    }

    if (!plan) {
        rt(p.source).pending.push_back({p.spec.pod_id, false});
        try_schedule(p.source);
        return;
    }

    ProxyRuntime pr;
    pr.proxy = std::move(plan->proxy);
    auto& stored = proxies_.emplace(e.pod, std::move(pr)).first->second;
    emit(fx::Proxy{e.pod, p.source, ProxyState::CandidatesPending, ""});
    for (const auto& c : plan->creations)
        send(c.pod, c.source, c.target, ev::ChaperonCreate{c.pod, c.source, c.target});
    arm_timer(stored, config_.federation.election_timeout);
}

void Simulator::on(const ev::ChaperonCreate& e) {
    auto& c = rt(e.target);
    if (c.chaperons.contains(e.pod))
        throw InvariantViolation("second chaperon for " + e.pod + " in " + e.target);
    PodChaperon ch;
    ch.pod = pod_rt(e.pod).spec;
    ch.source = e.source;
    ch.target = e.target;
    c.chaperons.emplace(e.pod, std::move(ch));
    emit(fx::Chaperon{e.pod, e.target, ChaperonState::PendingSchedule});
    c.pending.push_back({e.pod, true});
    try_schedule(e.target);
}

void Simulator::arm_timer(ProxyRuntime& pr, TimeMs delay) {
    ++pr.generation;
    pr.timer_armed = true;
    schedule(now() + delay, ev::ElectionTimeout{pr.proxy.original.pod_id, pr.generation});
}

void Simulator::on(const ev::CandidateReport& e) {
    auto& pr = proxies_.at(e.pod);
    if (pr.proxy.state == ProxyState::Bound || pr.proxy.state == ProxyState::Unschedulable) return;
    pr.reports[e.target] = CandidateReport{e.target, e.status, std::nullopt, e.score};

    if (e.status == ReportStatus::Conflict) {
        if (pr.proxy.state == ProxyState::Elected && pr.proxy.elected_target == e.target) {
            revert_election(pr.proxy);
            emit(fx::Proxy{e.pod, pr.proxy.source, pr.proxy.state, e.target});
        }
        pr.excluded.insert(e.target);
    }
    if (pr.proxy.state == ProxyState::CandidatesPending) evaluate(pr, false);
}

void Simulator::evaluate(ProxyRuntime& pr, bool from_timer) {
    const auto& proxy = pr.proxy;
    const bool all_reported = std::all_of(proxy.targets.begin(), proxy.targets.end(),
                                          [&](const ClusterId& t) { return pr.reports.contains(t); });
    const auto elected = elect_delegate(proxy, pr.reports, virtual_nodes_[proxy.source], pr.excluded, config_.federation);

    if (elected && (all_reported || from_timer || pr.timed_out)) {
        mark_elected(pr.proxy, *elected);
        ++pr.generation;  // cancels any armed timer
        pr.timer_armed = false;
        pr.backing_off = false;
        emit(fx::Proxy{proxy.original.pod_id, proxy.source, ProxyState::Elected, *elected});
        send(proxy.original.pod_id, proxy.source, *elected,
             ev::DelegateBind{proxy.original.pod_id, proxy.source, *elected});
        return;
    }
    if (!elected && (from_timer || (all_reported && !pr.backing_off))) {
        fail_round(pr);
        return;
    }
    if (!pr.timer_armed) arm_timer(pr, config_.federation.election_timeout);
}

void Simulator::fail_round(ProxyRuntime& pr) {
    ++pr.retries;
    pr.excluded.clear();
    if (pr.retries > config_.federation.max_retries) {
        give_up(pr);
        return;
    }
    pr.backing_off = true;
    arm_timer(pr, config_.federation.retry_backoff << (pr.retries - 1));
}

void Simulator::give_up(ProxyRuntime& pr) {
    auto& proxy = pr.proxy;
    proxy.state = ProxyState::Unschedulable;
    ++pr.generation;
    pr.timer_armed = false;
    emit(fx::Proxy{proxy.original.pod_id, proxy.source, ProxyState::Unschedulable, ""});
    set_phase(pod_rt(proxy.original.pod_id), PodPhase::Unschedulable);
    for (const auto& t : proxy.targets)
        send(proxy.original.pod_id, proxy.source, t, ev::CandidateDelete{proxy.original.pod_id, proxy.source, t});
}

void Simulator::on(const ev::ElectionTimeout& e) {
    auto& pr = proxies_.at(e.pod);
    if (e.generation != pr.generation || pr.proxy.state != ProxyState::CandidatesPending) return;
    pr.timer_armed = false;
    pr.timed_out = true;
    pr.backing_off = false;
    evaluate(pr, true);
}

void Simulator::on(const ev::DelegateBind& e) {
    auto& c = rt(e.target);
    auto& ch = c.chaperons.at(e.pod);
    if (ch.state != ChaperonState::CandidateReserved || !ch.reserved_node)
        throw InvariantViolation("delegate bind for " + e.pod + " in " + e.target + " hits chaperon in state " +
                                 std::string(to_string(ch.state)));
    auto& p = pod_rt(e.pod);

    bool conflict = pending_conflicts_.erase({e.pod, e.target}) > 0;
    if (!conflict && !config_.federation.reservations) {
        const auto& node = c.state->node(*ch.reserved_node);
        conflict = !fits(p.spec, node, c.state->allocatable(node.node_id)) ||
                   !c.state->within_quota(p.spec.ns, p.spec.request) || !c.state->spec().admits(p.spec.ns);
    }

    if (conflict) {
        release_chaperon(c, ch);
        ch.state = ChaperonState::PendingSchedule;
        ch.annotations.emplace_back("delegate.bind", "conflict");
        emit(fx::Chaperon{e.pod, e.target, ch.state});
        send(e.pod, e.target, e.source, ev::CandidateReport{e.pod, e.source, e.target, ReportStatus::Conflict, 0});
        c.pending.push_back({e.pod, true});
        try_schedule(e.target);
        return;
    }

    if (++delegate_count_[e.pod] > 1) throw InvariantViolation("second delegate for pod " + e.pod);
    ch.state = ChaperonState::Delegate;
    ch.annotations.emplace_back("delegate.bind", "bound");
    emit(fx::Chaperon{e.pod, e.target, ch.state});
    // The reservation becomes the binding; close it in the log first.
    if (config_.federation.reservations)
        emit(fx::Unreserved{e.pod, e.target, *ch.reserved_node, p.spec.request});
    start_workload(p, e.target, *ch.reserved_node, true);
    send(e.pod, e.target, e.source, ev::StatusMirror{e.pod, e.source, e.target, PodPhase::Bound});
    send(e.pod, e.target, e.source, ev::StatusMirror{e.pod, e.source, e.target, PodPhase::Running});
    push_aggregates(e.target);
}

void Simulator::on(const ev::CandidateDelete& e) {
    auto& c = rt(e.target);
    auto it = c.chaperons.find(e.pod);
    if (it == c.chaperons.end()) return;
    auto& ch = it->second;
    if (ch.state == ChaperonState::Delegate)
        throw InvariantViolation("delete sent to the delegate of " + e.pod + " in " + e.target);
    if (ch.state == ChaperonState::Deleted) return;
    const bool freed = ch.state == ChaperonState::CandidateReserved && config_.federation.reservations;
    release_chaperon(c, ch);
    std::erase_if(c.pending, [&](const PendingItem& i) { return i.chaperon && i.pod == e.pod; });
    ch.state = ChaperonState::Deleted;
    emit(fx::Chaperon{e.pod, e.target, ch.state});
    if (freed) try_schedule(e.target);
}

void Simulator::on(const ev::StatusMirror& e) {
    auto& pr = proxies_.at(e.pod);
    if (e.phase == PodPhase::Bound) {
        const auto deletions = finalize(pr.proxy, e.target);
        emit(fx::Proxy{e.pod, pr.proxy.source, ProxyState::Bound, e.target});
        emit(fx::Mirror{e.pod, pr.proxy.source, PodPhase::Bound});
        for (const auto& t : deletions) send(e.pod, pr.proxy.source, t, ev::CandidateDelete{e.pod, pr.proxy.source, t});
        return;
    }
    if (proxy_mirror(pr.proxy, e.phase)) emit(fx::Mirror{e.pod, pr.proxy.source, e.phase});
}

void Simulator::on(const ev::PodComplete& e) {
    auto& c = rt(e.cluster);
    auto& p = pod_rt(e.pod);
    const auto hold = c.state->release(e.pod);
    emit(fx::Released{e.pod, e.cluster, hold.node, hold.request});
    set_phase(p, PodPhase::Completed);

    if (proxies_.contains(e.pod))
        send(e.pod, e.cluster, p.source, ev::StatusMirror{e.pod, p.source, e.cluster, PodPhase::Completed});
    if (p.retrain) emit(fx::Registry{registry_.retrain_complete(now())});
    push_aggregates(e.cluster);
    try_schedule(e.cluster);
}

void Simulator::on(const ev::BatchJobSubmit& e) {
    auto& j = jobs_.at(e.job);
    rt(j.cluster).job_queue.push_back(e.job);
    emit(fx::Job{e.job, j.cluster, JobState::Queued, {}});
    run_batch(j.cluster);
}

void Simulator::run_batch(const ClusterId& cluster) {
    auto& c = rt(cluster);
    std::vector<BatchJob> queue;
    for (const auto& id : c.job_queue)
        if (jobs_.at(id).job.state == JobState::Queued) queue.push_back(jobs_.at(id).job);
    std::vector<NodeId> idle;
    for (const auto& n : c.state->nodes())
        if (n.pool == NodePool::Batch && n.state == NodeState::Ready && !c.node_job.contains(n.node_id))
            idle.push_back(n.node_id);
    std::sort(idle.begin(), idle.end());

    for (const auto& placement : batch_schedule(queue, idle)) {
        auto& j = jobs_.at(placement.job).job;
        j.state = JobState::Running;
        j.nodes = placement.nodes;
        j.start_time = now();
        for (const auto& n : j.nodes) c.node_job[n] = j.job_id;
        emit(fx::Job{j.job_id, cluster, JobState::Running, j.nodes});
        schedule(now() + j.duration, ev::JobComplete{j.job_id});
    }
}

void Simulator::on(const ev::JobComplete& e) {
    auto& jr = jobs_.at(e.job);
    auto& c = rt(jr.cluster);
    jr.job.state = JobState::Done;
    for (const auto& n : jr.job.nodes) c.node_job.erase(n);
    std::erase(c.job_queue, e.job);
    emit(fx::Job{e.job, jr.cluster, JobState::Done, jr.job.nodes});
    run_batch(jr.cluster);
}

void Simulator::on(const ev::RebalanceTick& e) {
    if (!busy()) return;
    auto& c = rt(e.cluster);

    std::vector<NodePoolStatus> status;
    for (const auto& n : c.state->nodes()) {
        NodePoolStatus s{n.node_id, n.pool, n.state, true, n.capacity, std::nullopt};
        s.idle = n.pool == NodePool::Batch ? !c.node_job.contains(n.node_id) : c.state->node_idle(n.node_id);
        if (auto it = c.last_pool_change.find(n.node_id); it != c.last_pool_change.end()) s.last_pool_change = it->second;
        status.push_back(s);
    }
    PoolDemand demand;
    demand.window = config_.metascale.tick;
    for (const auto& id : c.job_queue)
        if (const auto& j = jobs_.at(id).job; j.state == JobState::Queued) demand.batch_queue_depth += j.node_count;
    for (const auto& item : c.pending) demand.container_pending += pod_rt(item.pod).spec.request;

    for (const auto& move : rebalance(status, demand, config_.metascale, now())) {
        c.state->set_node_pool(move.node, move.to, NodeState::Repurposing);
        c.last_pool_change[move.node] = now();
        pool_effect(e.cluster, c.state->node(move.node));
        schedule(now() + config_.metascale.provisioning_delay, ev::NodeReady{e.cluster, move.node});
        if (move.from == NodePool::Container) push_aggregates(e.cluster);
    }
    if (now() + config_.metascale.tick <= config_.sim.duration)
        schedule(now() + config_.metascale.tick, ev::RebalanceTick{e.cluster});
}

void Simulator::on(const ev::NodeReady& e) {
    auto& c = rt(e.cluster);
    const auto& n = c.state->node(e.node);
    c.state->set_node_pool(e.node, n.pool, NodeState::Ready);
    pool_effect(e.cluster, n);
    if (n.pool == NodePool::Container) {
        push_aggregates(e.cluster);
        try_schedule(e.cluster);
    } else {
        run_batch(e.cluster);
    }
}

void Simulator::on(const ev::HeartbeatTick&) {
    if (!busy()) return;
    for (const auto& edge : config_.graph.edges())
        send("aggregate", edge.target, edge.source,
             ev::AggregateReport{edge.source, edge.target, rt(edge.target).state->aggregate()});
    if (now() + config_.federation.heartbeat <= config_.sim.duration)
        schedule(now() + config_.federation.heartbeat, ev::HeartbeatTick{});
}

void Simulator::on(const ev::AggregateReport& e) {
    auto& vn = virtual_nodes_[e.source][e.target];
    vn.source = e.source;
    vn.target = e.target;
    vn.aggregate = e.aggregate;
    vn.reported_at = now();
}

void Simulator::on(const ev::SensorMessage& e) {
    const auto& wf = *config_.scenario.wildfire;
    const auto& reading = e.reading;
    if (wf.rule.camera_cooldown > 0) {
        auto it = camera_last_fire_.find(reading.camera_id);
        if (it != camera_last_fire_.end() && now() - it->second < wf.rule.camera_cooldown) return;
    }
    const std::string id = "trig" + std::to_string(++trigger_counter_);
    auto subs = on_message(reading, wf.rule, id);
    if (subs.empty()) {
        --trigger_counter_;
        return;
    }
    camera_last_fire_[reading.camera_id] = now();
    triggers_[id] = TriggerRuntime{reading, registry_.read(now()), std::move(subs)};
    schedule(now() + wf.trigger_delay, ev::TriggerFired{id});
}

void Simulator::on(const ev::TriggerFired& e) {
    const auto& wf = *config_.scenario.wildfire;
    auto& trig = triggers_.at(e.trigger);
    fx::Trigger effect{e.trigger, trig.reading.camera_id, trig.model_version, {}};
    for (auto& sub : trig.submissions) {
        PodRuntime p{sub.pod, wf.submit_cluster, sub.role == WorkloadRole::Retrain};
        p.spec.submit_time = now();
        const auto id = p.spec.pod_id;
        if (pods_.contains(id)) throw InvariantViolation("duplicate pod id " + id);
        pods_.emplace(id, std::move(p));
        effect.pods.push_back(id);
        schedule(now(), ev::PodSubmit{id, wf.submit_cluster});
    }
    emit(std::move(effect));
}

// ---------------------------------------------------------------------------
// Introspection

const ClusterState& Simulator::cluster(const ClusterId& id) const {
    auto it = clusters_.find(id);
    if (it == clusters_.end()) throw UnknownCluster("unknown cluster '" + id + "'");
    return *it->second.state;
}

const PodSpec& Simulator::pod(const PodId& id) const { return pods_.at(id).spec; }

const ProxyPod* Simulator::proxy(const PodId& id) const {
    auto it = proxies_.find(id);
    return it == proxies_.end() ? nullptr : &it->second.proxy;
}

const PodChaperon* Simulator::chaperon(const PodId& pod, const ClusterId& target) const {
    auto c = clusters_.find(target);
    if (c == clusters_.end()) return nullptr;
    auto it = c->second.chaperons.find(pod);
    return it == c->second.chaperons.end() ? nullptr : &it->second;
}

std::vector<const PodChaperon*> Simulator::chaperons(const PodId& pod) const {
    std::vector<const PodChaperon*> out;
    for (const auto& [_, c] : clusters_)
        if (auto it = c.chaperons.find(pod); it != c.chaperons.end()) out.push_back(&it->second);
    return out;
}

const std::map<ClusterId, VirtualNode>& Simulator::virtual_nodes(const ClusterId& source) const {
    static const std::map<ClusterId, VirtualNode> empty;
    auto it = virtual_nodes_.find(source);
    return it == virtual_nodes_.end() ? empty : it->second;
}

const BatchJob& Simulator::job(const JobId& id) const { return jobs_.at(id).job; }

std::vector<PodId> Simulator::pod_ids() const {
    std::vector<PodId> out;
    for (const auto& [id, _] : pods_) out.push_back(id);
    return out;
}

void Simulator::check_invariants() const {
    for (const auto& [id, c] : clusters_) {
        c.state->check_invariants();
        // Every hold belongs to a local pod running here or to a chaperon here:
        // proxies never consume source capacity.
        for (const auto& [pod, h] : c.state->holds()) {
            auto ch = c.chaperons.find(pod);
            const bool chaperon_hold =
                ch != c.chaperons.end() &&
                ((h.kind == HoldKind::Reserved && ch->second.state == ChaperonState::CandidateReserved) ||
                 (h.kind == HoldKind::Bound && ch->second.state == ChaperonState::Delegate));
            const bool local_hold = h.kind == HoldKind::Bound && !proxies_.contains(pod) && pods_.contains(pod) &&
                                    pods_.at(pod).spec.placement && pods_.at(pod).spec.placement->cluster == id;
            if (!chaperon_hold && !local_hold)
                throw InvariantViolation("unexplained hold for pod " + pod + " in cluster " + id);
        }
        for (const auto& n : c.state->nodes()) {
            if (n.pool == NodePool::Container && c.node_job.contains(n.node_id))
                throw InvariantViolation("container node " + n.node_id + " runs a batch job");
            if (n.state == NodeState::Repurposing && c.node_job.contains(n.node_id))
                throw InvariantViolation("repurposing node " + n.node_id + " runs a batch job");
        }
    }
    for (const auto& [pod, n] : delegate_count_)
        if (n > 1) throw InvariantViolation("pod " + pod + " has " + std::to_string(n) + " delegates");
}

RunResult run(const RunConfig& config, std::uint64_t seed) {
    Simulator sim(config, seed);
    sim.run();
    return {sim.metrics(), sim.log()};
}

} // namespace fedsched
