use std::collections::VecDeque;

use crate::error::{AoiError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub id: u64,
    pub arrival: f64,
    /// Service requirement, drawn when the message arrives.
    pub service: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InService {
    pub message: Message,
    pub started: f64,
}

impl InService {
    pub fn completes_at(&self) -> f64 {
        self.started + self.message.service
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    /// The message arrives at `message.arrival`.
    Arrival(Message),
    Departure(f64),
}

/// What an arrival does to a busy single-cell buffer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum SingleCellPolicy {
    /// The newcomer replaces the message in service, whose service is lost.
    #[default]
    Preempt,
    /// The newcomer is dropped.
    Discard,
}

/// What an [`Event`] did to the buffer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transition {
    /// Arrival found the server idle.
    Started,
    /// Arrival took the front waiting cell; nothing was lost.
    Queued,
    /// Arrival took the front waiting cell and evicted this, the oldest
    /// waiting message.
    PushedOut(Message),
    /// `m = 1` under [`SingleCellPolicy::Discard`]: the newcomer was dropped.
    Discarded(Message),
    /// `m = 1` under [`SingleCellPolicy::Preempt`]: the newcomer took over
    /// the server and this message was dropped.
    Preempted(Message),
    /// Service completed; `next` is the id of the message now in service.
    Departed { message: Message, next: Option<u64> },
}

/// Cell contents of an `m`-cell LIFO buffer with pushout.
///
/// `waiting` holds at most `m − 1` messages, newest at the front. With
/// `m ≥ 2` service is never interrupted; a single cell follows its
/// [`SingleCellPolicy`].
#[derive(Debug, Clone, PartialEq)]
pub struct BufferState {
    capacity: usize,
    single_cell: SingleCellPolicy,
    in_service: Option<InService>,
    waiting: VecDeque<Message>,
}

impl BufferState {
    pub fn new(capacity: usize) -> Result<Self> {
        Self::with_policy(capacity, SingleCellPolicy::default())
    }

    pub fn with_policy(capacity: usize, single_cell: SingleCellPolicy) -> Result<Self> {
        if capacity == 0 {
            return Err(AoiError::InvalidParameter("buffer needs at least one cell".into()));
        }
        Ok(Self { capacity, single_cell, in_service: None, waiting: VecDeque::with_capacity(capacity) })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn in_service(&self) -> Option<&InService> {
        self.in_service.as_ref()
    }

    pub fn waiting(&self) -> &VecDeque<Message> {
        &self.waiting
    }

    /// Occupied cells, `Q(t)`.
    pub fn occupancy(&self) -> usize {
        usize::from(self.in_service.is_some()) + self.waiting.len()
    }

    pub fn next_completion(&self) -> Option<f64> {
        self.in_service.map(|s| s.completes_at())
    }

    pub fn apply(&mut self, event: Event) -> Result<Transition> {
        match event {
            Event::Arrival(msg) => Ok(self.arrive(msg)),
            Event::Departure(t) => self.depart(t),
        }
    }

    fn arrive(&mut self, msg: Message) -> Transition {
        if self.in_service.is_none() {
            self.in_service = Some(InService { message: msg, started: msg.arrival });
            return Transition::Started;
        }
        if self.capacity == 1 {
            return match self.single_cell {
                SingleCellPolicy::Discard => Transition::Discarded(msg),
                SingleCellPolicy::Preempt => {
                    let old = self.in_service.replace(InService { message: msg, started: msg.arrival });
                    Transition::Preempted(old.expect("busy server").message)
                }
            };
        }
        self.waiting.push_front(msg);
        if self.waiting.len() > self.capacity - 1 {
            let evicted = self.waiting.pop_back().expect("non-empty after push");
            Transition::PushedOut(evicted)
        } else {
            Transition::Queued
        }
    }

    fn depart(&mut self, t: f64) -> Result<Transition> {
        let done = self
            .in_service
            .take()
            .ok_or_else(|| AoiError::Protocol(format!("departure at {t} with an idle server")))?;
        self.in_service = self.waiting.pop_front().map(|m| InService { message: m, started: t });
        Ok(Transition::Departed { message: done.message, next: self.in_service.map(|s| s.message.id) })
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.waiting.len() > self.capacity - 1 {
            return Err(AoiError::Protocol(format!(
                "{} waiting messages in a {}-cell buffer",
                self.waiting.len(),
                self.capacity
            )));
        }
        if self.in_service.is_none() && !self.waiting.is_empty() {
            return Err(AoiError::Protocol("messages waiting behind an idle server".into()));
        }
        // ids are strict; far into a run two arrivals can share a timestamp
        let ordered =
            self.waiting.iter().zip(self.waiting.iter().skip(1)).all(|(a, b)| a.id > b.id && a.arrival >= b.arrival);
        if !ordered {
            return Err(AoiError::Protocol("waiting cells not in decreasing arrival order".into()));
        }
        Ok(())
    }
}
