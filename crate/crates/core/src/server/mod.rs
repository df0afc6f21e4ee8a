//! TCP front end: one thread and one [`Session`] per connection, one JSON object per line.

pub mod protocol;

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread::{self, JoinHandle};

use log::{debug, info, warn};
use serde_json::{json, Value};

use crate::config::EpisodeConfig;
use crate::env::{Episode, StepOutcome};
use crate::error::SimError;
use protocol::{parse_request, per_agent_json, spec_reply, ErrorCode, ProtocolError, Request};

pub use protocol::PROTOCOL_VERSION;

/// Per-connection state. At most one episode is active at a time.
#[derive(Debug)]
pub struct Session {
    pub id: u64,
    cfg: EpisodeConfig,
    episode: Option<Episode>,
    episodes: u64,
    closed: bool,
}

impl Session {
    pub fn new(id: u64, cfg: EpisodeConfig) -> Self {
        Self { id, cfg, episode: None, episodes: 0, closed: false }
    }

    /// Episodes started in this session so far.
    pub fn episode_count(&self) -> u64 {
        self.episodes
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Processes one request line and returns the reply object.
    pub fn handle_line(&mut self, line: &str) -> Value {
        match parse_request(line).and_then(|req| self.handle(req)) {
            Ok(reply) => reply,
            Err(e) => e.to_reply(),
        }
    }

    pub fn handle(&mut self, request: Request) -> Result<Value, ProtocolError> {
        match request {
            Request::Spec => Ok(spec_reply(&self.cfg)),
            Request::Close => {
                self.closed = true;
                self.episode = None;
                Ok(json!({ "ok": true, "closed": true, "episodes": self.episodes }))
            }
            Request::Reset { scenario, seed } => {
                let (episode, observations) = Episode::reset(scenario, seed, &self.cfg)
                    .map_err(|e| ProtocolError::new(ErrorCode::ResetFailed, e.to_string()))?;
                self.episodes += 1;
                let st = episode.state();
                let reply = json!({
                    "ok": true,
                    "episode": self.episodes,
                    "scenario": scenario.number(),
                    "seed": seed,
                    "observations": per_agent_json(&observations),
                    "info": {
                        "tmin": per_agent_json(&st.initial_tmin),
                        "evader_state": st.evader,
                        "destination": st.destination,
                        "target_velocity": st.target_velocity,
                        "opponent": st.opponent,
                    },
                });
                self.episode = Some(episode);
                Ok(reply)
            }
            Request::Step { actions } => {
                let episode = self
                    .episode
                    .as_mut()
                    .ok_or_else(|| ProtocolError::new(ErrorCode::NoEpisode, "no active episode; send reset first"))?;
                match episode.step(&actions) {
                    Ok(outcome) => Ok(step_reply(&outcome)),
                    Err(SimError::ContractViolation(d)) => Err(ProtocolError::new(ErrorCode::EpisodeDone, d)),
                    Err(SimError::InvalidArgument(d)) => Err(ProtocolError::new(ErrorCode::BadAction, d)),
                    Err(e) => Err(ProtocolError::new(ErrorCode::Internal, e.to_string())),
                }
            }
        }
    }
}

fn step_reply(outcome: &StepOutcome) -> Value {
    json!({
        "ok": true,
        "observations": per_agent_json(&outcome.observations),
        "rewards": per_agent_json(&outcome.rewards),
        "done": outcome.done,
        "status": outcome.status.as_str(),
        "info": outcome.info,
    })
}

fn serve_connection(stream: TcpStream, mut session: Session) -> io::Result<()> {
    let peer = stream.peer_addr().ok();
    stream.set_nodelay(true)?;
    let mut writer = stream.try_clone()?;
    let reader = BufReader::new(stream);
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = session.handle_line(&line);
        let mut text = serde_json::to_string(&reply).expect("reply serializes");
        text.push('\n');
        writer.write_all(text.as_bytes())?;
        writer.flush()?;
        if session.is_closed() {
            break;
        }
    }
    debug!("session {} with {:?} ended after {} episodes", session.id, peer, session.episodes);
    Ok(())
}

/// A bound listener that has not started accepting yet.
pub struct Server {
    listener: TcpListener,
    cfg: Arc<EpisodeConfig>,
    next_id: Arc<AtomicU64>,
}

impl Server {
    pub fn bind(addr: impl ToSocketAddrs, cfg: EpisodeConfig) -> io::Result<Self> {
        cfg.validate().map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
        Ok(Self {
            listener: TcpListener::bind(addr)?,
            cfg: Arc::new(cfg),
            next_id: Arc::new(AtomicU64::new(1)),
        })
    }

    pub fn local_addr(&self) -> io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Accepts connections forever, one worker thread each.
    pub fn run(self) -> io::Result<()> {
        info!("listening on {}", self.listener.local_addr()?);
        for stream in self.listener.incoming() {
            let stream = match stream {
                Ok(s) => s,
                Err(e) => {
                    warn!("accept failed: {e}");
                    continue;
                }
            };
            let id = self.next_id.fetch_add(1, Ordering::Relaxed);
            let session = Session::new(id, (*self.cfg).clone());
            thread::spawn(move || {
                if let Err(e) = serve_connection(stream, session) {
                    debug!("session {id} dropped: {e}");
                }
            });
        }
        Ok(())
    }

    /// Runs the accept loop on a background thread.
    pub fn spawn(self) -> io::Result<(SocketAddr, JoinHandle<io::Result<()>>)> {
        let addr = self.local_addr()?;
        Ok((addr, thread::spawn(move || self.run())))
    }
}
