//! Discrete-event core. Tasks form a dependency graph and contend for
//! counted resources served first come, first served. Events fire in
//! (time, insertion sequence) order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

pub type Ns = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Stack,
    Ftl,
    Nand,
    Bus,
    Dram,
    Crypto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResId(u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskId(u32);

#[derive(Debug, Clone, Copy)]
pub enum Step {
    /// Occupies one unit of the resource for the duration.
    Work(ResId, Ns),
    /// Takes one unit and keeps it until a matching `Release`.
    Acquire(ResId),
    Release(ResId),
    Delay(Ns),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub time_ns: Ns,
    pub seq: u64,
    pub resource: String,
    pub action: &'static str,
    pub label: &'static str,
    pub request: u32,
}

#[derive(Debug, Clone)]
struct Resource {
    name: String,
    capacity: u32,
    busy: u32,
    queue: VecDeque<TaskId>,
}

#[derive(Debug, Clone)]
struct Task {
    step: Step,
    cat: Category,
    label: &'static str,
    request: u32,
    deps_left: u32,
    succ: Vec<TaskId>,
    /// Dependency whose completion made the task ready.
    ready_by: Option<TaskId>,
    /// Predecessor on the critical path: `ready_by` or the task that freed the resource.
    enabler: Option<TaskId>,
    start: Ns,
    end: Ns,
    done: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Ready,
    Finish,
}

#[derive(Debug, Clone, Default)]
pub struct Engine {
    resources: Vec<Resource>,
    tasks: Vec<Task>,
    roots: Vec<(TaskId, Ns)>,
    heap: BinaryHeap<Reverse<(Ns, u64, Kind, u32)>>,
    seq: u64,
    logged: u64,
    now: Ns,
    trace: Option<Vec<TraceRow>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn take_trace(&mut self) -> Vec<TraceRow> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn now(&self) -> Ns {
        self.now
    }

    pub fn add_resource(&mut self, name: impl Into<String>, capacity: u32) -> ResId {
        assert!(capacity > 0, "resource capacity must be positive");
        self.resources.push(Resource { name: name.into(), capacity, busy: 0, queue: VecDeque::new() });
        ResId(self.resources.len() as u32 - 1)
    }

    /// Adds a task; one without dependencies becomes ready at `release_at`.
    pub fn add(
        &mut self,
        step: Step,
        cat: Category,
        label: &'static str,
        request: u32,
        deps: &[TaskId],
        release_at: Ns,
    ) -> TaskId {
        let id = TaskId(self.tasks.len() as u32);
        let mut pending = 0;
        for d in deps {
            let dep = &mut self.tasks[d.0 as usize];
            assert!(!dep.done, "dependency already finished");
            dep.succ.push(id);
            pending += 1;
        }
        self.tasks.push(Task {
            step,
            cat,
            label,
            request,
            deps_left: pending,
            succ: Vec::new(),
            ready_by: None,
            enabler: None,
            start: 0,
            end: 0,
            done: false,
        });
        if pending == 0 {
            self.roots.push((id, release_at.max(self.now)));
        }
        id
    }

    fn push(&mut self, t: Ns, kind: Kind, task: TaskId) {
        self.seq += 1;
        self.heap.push(Reverse((t, self.seq, kind, task.0)));
    }

    fn log(&mut self, t: Ns, res: Option<ResId>, action: &'static str, task: TaskId) {
        if let Some(rows) = self.trace.as_mut() {
            let tk = &self.tasks[task.0 as usize];
            let resource = res.map(|r| self.resources[r.0 as usize].name.clone()).unwrap_or_default();
            rows.push(TraceRow { time_ns: t, seq: self.logged, resource, action, label: tk.label, request: tk.request });
            self.logged += 1;
        }
    }

    /// Processes events until every added task has finished.
    pub fn run(&mut self) {
        for (id, t) in std::mem::take(&mut self.roots) {
            self.push(t, Kind::Ready, id);
        }
        while let Some(Reverse((t, _, kind, raw))) = self.heap.pop() {
            debug_assert!(t >= self.now, "time went backwards");
            self.now = t;
            let id = TaskId(raw);
            match kind {
                Kind::Ready => self.try_start(id, t),
                Kind::Finish => self.finish(id, t),
            }
        }
    }

    fn try_start(&mut self, id: TaskId, t: Ns) {
        let step = self.tasks[id.0 as usize].step;
        {
            let tk = &mut self.tasks[id.0 as usize];
            tk.enabler = tk.ready_by;
        }
        match step {
            Step::Work(r, _) | Step::Acquire(r) => {
                let res = &mut self.resources[r.0 as usize];
                if res.busy < res.capacity {
                    res.busy += 1;
                    self.begin(id, t);
                } else {
                    res.queue.push_back(id);
                    self.log(t, Some(r), "wait", id);
                }
            }
            Step::Release(r) => {
                self.tasks[id.0 as usize].start = t;
                self.log(t, Some(r), "release", id);
                self.free_unit(r, t, id);
                self.push(t, Kind::Finish, id);
            }
            Step::Delay(_) | Step::Join => self.begin(id, t),
        }
    }

    fn begin(&mut self, id: TaskId, t: Ns) {
        let step = self.tasks[id.0 as usize].step;
        self.tasks[id.0 as usize].start = t;
        let end = match step {
            Step::Work(r, d) => {
                self.log(t, Some(r), "start", id);
                t + d
            }
            Step::Acquire(r) => {
                self.log(t, Some(r), "acquire", id);
                t
            }
            Step::Delay(d) => {
                self.log(t, None, "delay", id);
                t + d
            }
            Step::Join | Step::Release(_) => t,
        };
        self.push(end, Kind::Finish, id);
    }

    fn free_unit(&mut self, r: ResId, t: Ns, by: TaskId) {
        let res = &mut self.resources[r.0 as usize];
        assert!(res.busy > 0, "release of an idle resource {}", res.name);
        res.busy -= 1;
        if let Some(next) = res.queue.pop_front() {
            res.busy += 1;
            self.tasks[next.0 as usize].enabler = Some(by);
            self.begin(next, t);
        }
    }

    fn finish(&mut self, id: TaskId, t: Ns) {
        let step = self.tasks[id.0 as usize].step;
        {
            let tk = &mut self.tasks[id.0 as usize];
            tk.end = t;
            tk.done = true;
        }
        if let Step::Work(r, _) = step {
            self.log(t, Some(r), "end", id);
            self.free_unit(r, t, id);
        }
        let succ = std::mem::take(&mut self.tasks[id.0 as usize].succ);
        for s in succ {
            let tk = &mut self.tasks[s.0 as usize];
            tk.deps_left -= 1;
            if tk.deps_left == 0 {
                tk.ready_by = Some(id);
                self.push(t, Kind::Ready, s);
            }
        }
    }

    pub fn end_of(&self, id: TaskId) -> Ns {
        let tk = &self.tasks[id.0 as usize];
        assert!(tk.done, "task has not finished");
        tk.end
    }

    /// Time spent per category along the critical path into `sink`, counted from `floor`.
    pub fn critical_path(&self, sink: TaskId, floor: Ns) -> Vec<(Category, Ns)> {
        let mut out = Vec::new();
        let mut cur = Some(sink);
        while let Some(id) = cur {
            let tk = &self.tasks[id.0 as usize];
            let from = tk.start.max(floor);
            if tk.end > from {
                out.push((tk.cat, tk.end - from));
            }
            if tk.start <= floor {
                break;
            }
            cur = tk.enabler;
        }
        out
    }

    /// Drops finished tasks once the engine is idle.
    pub fn clear_tasks(&mut self) {
        assert!(self.heap.is_empty() && self.roots.is_empty(), "engine still has pending events");
        assert!(self.resources.iter().all(|r| r.busy == 0), "a resource is still held");
        self.tasks.clear();
    }

    /// Moves the clock forward while idle.
    pub fn advance(&mut self, dt: Ns) {
        self.now += dt;
    }
}
