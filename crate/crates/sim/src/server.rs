//! Live session endpoint. One client at a time; the world is driven by the
//! client's control messages on top of an optional scripted scenario.

use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use tungstenite::{Message, WebSocket};
use vip_core::audio::SAMPLE_RATE;
use vip_core::vision::Point2;

use crate::audio::AudioSynth;
use crate::engine::Session;
use crate::error::SimError;
use crate::protocol::{ClientBody, ClientValidator, ServerBody, ServerMessage, Snapshot};
use crate::render::{render_scene, Scene};
use crate::scenario::Scenario;
use crate::world::{Keyframe, WorldState, DEFAULT_MARKER_HSV};

const SAMPLES_PER_MS: u64 = SAMPLE_RATE as u64 / 1000;
/// Poll interval for client input between frames.
const POLL: Duration = Duration::from_millis(1);
/// How long to wait for a WebSocket upgrade request before assuming raw lines.
const SNIFF: Duration = Duration::from_millis(200);

/// Display-object pose of an interactive session without a scenario.
pub const DEFAULT_POSE: [Point2; 4] = [
    Point2::new(160.0, 80.0),
    Point2::new(600.0, 80.0),
    Point2::new(600.0, 410.0),
    Point2::new(160.0, 410.0),
];

/// Scenario behind an interactive session: a fixed surface and nothing else.
pub fn interactive_scenario() -> Scenario {
    let mut w = WorldState::new(u64::MAX);
    w.pose = vec![Keyframe::new(0, Some(DEFAULT_POSE))];
    Scenario::new(w)
}

enum Transport {
    Lines {
        reader: BufReader<TcpStream>,
        writer: TcpStream,
        partial: Vec<u8>,
    },
    Ws(Box<WebSocket<TcpStream>>),
}

fn would_block(e: &std::io::Error) -> bool {
    matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut)
}

impl Transport {
    /// Raw lines unless the client opens with an HTTP upgrade request.
    fn open(stream: TcpStream) -> Result<Self, SimError> {
        stream.set_nodelay(true)?;
        stream.set_read_timeout(Some(SNIFF))?;
        let mut head = [0u8; 4];
        let deadline = Instant::now() + SNIFF;
        let mut is_ws = false;
        while Instant::now() < deadline {
            match stream.peek(&mut head) {
                Ok(n) if n >= 4 => {
                    is_ws = &head == b"GET ";
                    break;
                }
                Ok(0) => break,
                Ok(_) => std::thread::sleep(POLL),
                Err(e) if would_block(&e) => break,
                Err(e) => return Err(e.into()),
            }
        }
        if is_ws {
            stream.set_read_timeout(None)?;
            let ws = tungstenite::accept(stream)
                .map_err(|e| SimError::Protocol(format!("websocket handshake: {e}")))?;
            ws.get_ref().set_read_timeout(Some(POLL))?;
            Ok(Transport::Ws(Box::new(ws)))
        } else {
            stream.set_read_timeout(Some(POLL))?;
            Ok(Transport::Lines {
                reader: BufReader::new(stream.try_clone()?),
                writer: stream,
                partial: Vec::new(),
            })
        }
    }

    /// Complete messages received so far, and whether the peer has gone.
    fn poll(&mut self) -> Result<(Vec<String>, bool), SimError> {
        let mut out = Vec::new();
        match self {
            Transport::Lines {
                reader, partial, ..
            } => loop {
                match reader.read_until(b'\n', partial) {
                    Ok(0) => return Ok((out, true)),
                    Ok(_) if partial.ends_with(b"\n") => {
                        let line = String::from_utf8_lossy(partial).into_owned();
                        partial.clear();
                        if !line.trim().is_empty() {
                            out.push(line);
                        }
                    }
                    Ok(_) => {}
                    Err(e) if would_block(&e) => return Ok((out, false)),
                    Err(e) if e.kind() == ErrorKind::ConnectionReset => return Ok((out, true)),
                    Err(e) => return Err(e.into()),
                }
            },
            Transport::Ws(ws) => loop {
                match ws.read() {
                    Ok(Message::Text(text)) => out.push(text.to_string()),
                    Ok(Message::Binary(bytes)) => {
                        out.push(String::from_utf8_lossy(&bytes).into_owned())
                    }
                    Ok(Message::Close(_)) => return Ok((out, true)),
                    Ok(_) => {}
                    Err(tungstenite::Error::Io(e)) if would_block(&e) => return Ok((out, false)),
                    Err(
                        tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed,
                    ) => return Ok((out, true)),
                    Err(tungstenite::Error::Protocol(_)) => return Ok((out, true)),
                    Err(e) => return Err(e.into()),
                }
            },
        }
    }

    fn send(&mut self, msg: &ServerMessage) -> Result<(), SimError> {
        let text = serde_json::to_string(msg).expect("server messages serialize");
        match self {
            Transport::Lines { writer, .. } => {
                writer.write_all(text.as_bytes())?;
                writer.write_all(b"\n")?;
                Ok(())
            }
            Transport::Ws(ws) => Ok(ws.send(Message::text(text))?),
        }
    }

    fn close(mut self) {
        match &mut self {
            Transport::Lines { writer, .. } => {
                let _ = writer.flush();
                let _ = writer.shutdown(std::net::Shutdown::Both);
            }
            Transport::Ws(ws) => {
                let _ = ws.close(None);
                let _ = ws.flush();
            }
        }
    }
}

/// World as scripted, with the client's overrides on top.
struct LiveWorld {
    script: WorldState,
    marker: Option<Option<Point2>>,
    pose: Option<Option<[Point2; 4]>>,
    taps: Vec<u64>,
}

impl LiveWorld {
    fn scene(&self, t: u64) -> Scene {
        let scripted = self.script.scene_at(t);
        let colour = self
            .script
            .marker
            .as_ref()
            .map_or(DEFAULT_MARKER_HSV, |m| m.colour);
        Scene {
            pose: self.pose.unwrap_or(scripted.pose),
            marker: match self.marker {
                Some(m) => m.map(|p| (p, colour)),
                None => scripted.marker,
            },
        }
    }
}

/// How a client session ended.
#[derive(Debug, Clone, PartialEq)]
pub enum SessionEnd {
    /// The client disconnected.
    Closed { frames: u64 },
    /// The client broke the protocol and was sent an error.
    Rejected { frames: u64, message: String },
}

pub struct Server {
    listener: TcpListener,
    scenario: Scenario,
    frames: Arc<AtomicU64>,
}

impl Server {
    pub fn bind<A: ToSocketAddrs>(addr: A, scenario: Scenario) -> Result<Self, SimError> {
        scenario.validate()?;
        Ok(Self {
            listener: TcpListener::bind(addr)?,
            scenario,
            frames: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr, SimError> {
        Ok(self.listener.local_addr()?)
    }

    /// Shared count of frames processed over all sessions.
    pub fn frame_counter(&self) -> Arc<AtomicU64> {
        Arc::clone(&self.frames)
    }

    /// Serves clients one after another until an I/O error on the listener.
    pub fn serve_forever(&self) -> Result<(), SimError> {
        loop {
            match self.serve_one() {
                Ok(_) | Err(SimError::Io(_) | SimError::WebSocket(_) | SimError::Protocol(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    /// Waits for a client and runs one session with it.
    pub fn serve_one(&self) -> Result<SessionEnd, SimError> {
        let (stream, _) = self.listener.accept()?;
        let mut io = Transport::open(stream)?;
        let end = self.run_session(&mut io);
        io.close();
        end
    }

    fn run_session(&self, io: &mut Transport) -> Result<SessionEnd, SimError> {
        let sc = &self.scenario;
        let w = &sc.world;
        let mut world = LiveWorld {
            script: w.clone(),
            marker: None,
            pose: None,
            taps: w.taps.clone(),
        };
        let mut session = Session::new(sc.session, sc.palette.clone())?;
        let mut synth = AudioSynth::new(w.seed, w.noise.audio_rms);
        let mut validator = ClientValidator::default();
        let mut seq = 0u64;
        let mut send = |io: &mut Transport, t: u64, body: ServerBody| -> Result<(), SimError> {
            io.send(&ServerMessage { seq, t, body })?;
            seq += 1;
            Ok(())
        };
        send(
            io,
            0,
            ServerBody::Config {
                frame_rate: w.frame_rate,
                width: w.width,
                height: w.height,
                strip: sc.session.strip,
            },
        )?;
        send(
            io,
            0,
            ServerBody::Snapshot {
                state: Snapshot::of(&session),
            },
        )?;

        let start = Instant::now();
        let mut last_snapshot = Snapshot::of(&session);
        let mut last_t = 0;
        for k in 0u64.. {
            let t = k * 1000 / w.frame_rate as u64;
            // Take client input until the frame is due.
            loop {
                let (messages, closed) = io.poll()?;
                for text in messages {
                    let msg = match validator.accept(&text) {
                        Ok(m) => m,
                        Err(message) => {
                            send(
                                io,
                                last_t,
                                ServerBody::Error {
                                    message: message.clone(),
                                },
                            )?;
                            return Ok(SessionEnd::Rejected { frames: k, message });
                        }
                    };
                    match msg.body {
                        ClientBody::MarkerMove { x, y } => {
                            world.marker = Some(Some(Point2::new(x, y)))
                        }
                        ClientBody::MarkerHide => world.marker = Some(None),
                        ClientBody::Tap => {
                            world.taps.push(synth.position().div_ceil(SAMPLES_PER_MS))
                        }
                        ClientBody::PoseSet { corners } => world.pose = Some(corners),
                    }
                }
                if closed {
                    return Ok(SessionEnd::Closed { frames: k });
                }
                if start.elapsed() >= Duration::from_millis(t) {
                    break;
                }
            }
            let frame = render_scene(
                &world.scene(t),
                w.width,
                w.height,
                w.noise.luma_sigma,
                w.seed ^ t,
            );
            let audio = synth.render(
                &world.taps,
                (t * SAMPLES_PER_MS - synth.position()) as usize,
            );
            let events = session.step(&frame, t, &audio)?;
            self.frames.fetch_add(1, Ordering::Relaxed);
            last_t = t;
            let horizon = synth.position() / SAMPLES_PER_MS;
            world.taps.retain(|&tap| tap + 1000 > horizon);
            for event in events {
                send(io, t, ServerBody::Event { event })?;
            }
            let snap = Snapshot::of(&session);
            if snap != last_snapshot {
                send(
                    io,
                    t,
                    ServerBody::Snapshot {
                        state: snap.clone(),
                    },
                )?;
                last_snapshot = snap;
            }
        }
        unreachable!("frame loop only exits by returning")
    }
}

/// Binds `host:port` and serves clients until the listener fails.
pub fn serve_session(host: &str, port: u16, scenario: Option<Scenario>) -> Result<(), SimError> {
    let server = Server::bind((host, port), scenario.unwrap_or_else(interactive_scenario))?;
    server.serve_forever()
}
