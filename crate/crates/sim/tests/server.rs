use std::io::{BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpStream};
use std::sync::atomic::Ordering;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use vip_core::gesture::{GestureKind, Target};
use vip_core::vision::Point2;
use vip_sim::protocol::{ServerBody, ServerMessage};
use vip_sim::server::{interactive_scenario, Server, SessionEnd};
use vip_sim::{SessionEvent, SimError};

const PATIENCE: Duration = Duration::from_secs(30);

fn start() -> (SocketAddr, JoinHandle<Result<SessionEnd, SimError>>) {
    let server = Server::bind("127.0.0.1:0", interactive_scenario()).unwrap();
    let addr = server.local_addr().unwrap();
    (addr, std::thread::spawn(move || server.serve_one()))
}

struct LineClient {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    seq: u64,
    t: u64,
}

impl LineClient {
    fn connect(addr: SocketAddr) -> Self {
        let writer = TcpStream::connect(addr).unwrap();
        writer.set_read_timeout(Some(PATIENCE)).unwrap();
        Self {
            reader: BufReader::new(writer.try_clone().unwrap()),
            writer,
            seq: 0,
            t: 0,
        }
    }

    fn send_raw(&mut self, line: &str) {
        self.writer.write_all(line.as_bytes()).unwrap();
        self.writer.write_all(b"\n").unwrap();
    }

    fn send(&mut self, body: serde_json::Value) {
        self.seq += 1;
        self.t += 10;
        let mut msg = body;
        msg["seq"] = self.seq.into();
        msg["t"] = self.t.into();
        self.send_raw(&msg.to_string());
    }

    /// Next message, or `None` once the server has closed the connection.
    fn recv(&mut self) -> Option<ServerMessage> {
        let mut line = String::new();
        match self.reader.read_line(&mut line) {
            Ok(0) => None,
            Ok(_) => Some(
                serde_json::from_str(&line)
                    .unwrap_or_else(|e| panic!("bad server line {line:?}: {e}")),
            ),
            Err(e) if e.kind() == std::io::ErrorKind::ConnectionReset => None,
            Err(e) => panic!("read failed: {e}"),
        }
    }

    fn recv_until(&mut self, mut pred: impl FnMut(&ServerMessage) -> bool) -> ServerMessage {
        let deadline = Instant::now() + PATIENCE;
        while Instant::now() < deadline {
            let msg = self.recv().expect("connection closed early");
            if pred(&msg) {
                return msg;
            }
        }
        panic!("no matching message within {PATIENCE:?}");
    }
}

fn marker_near(msg: &ServerMessage, at: Point2) -> bool {
    matches!(&msg.body, ServerBody::Snapshot { state } if state.marker.is_some_and(|m| m.distance(at) < 2.0))
}

fn gesture(msg: &ServerMessage, kind: GestureKind) -> Option<u64> {
    match &msg.body {
        ServerBody::Event {
            event: SessionEvent::Gesture(g),
        } if g.kind == kind => Some(g.t),
        _ => None,
    }
}

#[test]
fn place_an_element_over_ndjson() {
    let (addr, handle) = start();
    let mut c = LineClient::connect(addr);
    let first = c.recv().unwrap();
    assert_eq!(first.seq, 0);
    assert!(matches!(
        first.body,
        ServerBody::Config {
            frame_rate: 30,
            width: 640,
            height: 480,
            ..
        }
    ));
    let second = c.recv().unwrap();
    let ServerBody::Snapshot { state } = second.body else {
        panic!("expected a snapshot, got {second:?}")
    };
    assert!(state.layout.is_empty());
    // Sent before the first frame, so nothing is tracked yet.
    assert!(state.pose.is_none());
    c.recv_until(|m| matches!(&m.body, ServerBody::Snapshot { state } if state.pose.is_some()));

    let slot = Point2::new(48.0, 44.0);
    c.send(serde_json::json!({"type": "marker_move", "x": slot.x, "y": slot.y}));
    c.recv_until(|m| marker_near(m, slot));
    c.send(serde_json::json!({"type": "tap"}));
    let select = c.recv_until(|m| gesture(m, GestureKind::Select).is_some());
    let ServerBody::Event {
        event: SessionEvent::Gesture(g),
    } = &select.body
    else {
        unreachable!()
    };
    assert!(matches!(g.target, Target::Slot(_)), "{g:?}");

    let spot = Point2::new(300.0, 200.0);
    c.send(serde_json::json!({"type": "marker_move", "x": spot.x, "y": spot.y}));
    c.recv_until(|m| marker_near(m, spot));
    c.send(serde_json::json!({"type": "tap"}));
    let place = c.recv_until(|m| gesture(m, GestureKind::Place).is_some());
    let latency = place.t - gesture(&place, GestureKind::Place).unwrap();
    assert!(
        latency <= 67,
        "gesture reported {latency} ms after it happened"
    );

    let snap = c.recv_until(
        |m| matches!(&m.body, ServerBody::Snapshot { state } if !state.layout.is_empty()),
    );
    let ServerBody::Snapshot { state } = snap.body else {
        unreachable!()
    };
    assert_eq!(state.layout.len(), 1);
    drop(c);
    match handle.join().unwrap().unwrap() {
        SessionEnd::Closed { frames } => assert!(frames > 0),
        other => panic!("unexpected end {other:?}"),
    }
}

#[test]
fn server_messages_are_numbered_and_timed() {
    let (addr, handle) = start();
    let mut c = LineClient::connect(addr);
    c.send(serde_json::json!({"type": "marker_move", "x": 300.0, "y": 200.0}));
    let spot = Point2::new(300.0, 200.0);
    let mut seen = Vec::new();
    c.recv_until(|m| {
        seen.push(m.clone());
        marker_near(m, spot)
    });
    assert!(seen.len() >= 4, "{seen:?}");
    for (i, m) in seen.iter().enumerate() {
        assert_eq!(m.seq, i as u64);
    }
    assert!(seen.windows(2).all(|w| w[0].t <= w[1].t));
    drop(c);
    handle.join().unwrap().unwrap();
}

#[test]
fn malformed_message_gets_an_error_and_close() {
    let (addr, handle) = start();
    let mut c = LineClient::connect(addr);
    c.send_raw("{\"seq\": 1, \"t\": 0, \"type\": \"teleport\"}");
    let err = c.recv_until(|m| matches!(m.body, ServerBody::Error { .. }));
    assert!(matches!(err.body, ServerBody::Error { ref message } if !message.is_empty()));
    assert!(c.recv().is_none());
    assert!(matches!(
        handle.join().unwrap().unwrap(),
        SessionEnd::Rejected { .. }
    ));
}

#[test]
fn repeated_seq_is_rejected() {
    let (addr, handle) = start();
    let mut c = LineClient::connect(addr);
    c.send_raw(r#"{"seq": 5, "t": 0, "type": "marker_hide"}"#);
    c.send_raw(r#"{"seq": 5, "t": 1, "type": "marker_hide"}"#);
    let err = c.recv_until(|m| matches!(m.body, ServerBody::Error { .. }));
    let ServerBody::Error { message } = err.body else {
        unreachable!()
    };
    assert!(message.contains("seq"), "{message}");
    assert!(c.recv().is_none());
    match handle.join().unwrap().unwrap() {
        SessionEnd::Rejected { message: m, .. } => assert_eq!(m, message),
        other => panic!("unexpected end {other:?}"),
    }
}

#[test]
fn websocket_client_gets_the_same_stream() {
    use tungstenite::{stream::MaybeTlsStream, Message};
    let (addr, handle) = start();
    let (mut ws, _) = tungstenite::connect(format!("ws://{addr}/")).unwrap();
    if let MaybeTlsStream::Plain(s) = ws.get_ref() {
        s.set_read_timeout(Some(PATIENCE)).unwrap();
    }
    let mut recv = || loop {
        if let Message::Text(text) = ws.read().unwrap() {
            return serde_json::from_str::<ServerMessage>(&text).unwrap();
        }
    };
    assert!(matches!(recv().body, ServerBody::Config { .. }));
    assert!(matches!(recv().body, ServerBody::Snapshot { .. }));
    let spot = Point2::new(250.0, 300.0);
    ws.send(Message::text(
        r#"{"seq": 0, "t": 0, "type": "marker_move", "x": 250.0, "y": 300.0}"#,
    ))
    .unwrap();
    let deadline = Instant::now() + PATIENCE;
    loop {
        assert!(Instant::now() < deadline, "marker never showed up");
        let msg = {
            let m = ws.read().unwrap();
            match m {
                Message::Text(text) => serde_json::from_str::<ServerMessage>(&text).unwrap(),
                _ => continue,
            }
        };
        if marker_near(&msg, spot) {
            break;
        }
    }
    ws.close(None).unwrap();
    while ws.read().is_ok() {}
    assert!(matches!(
        handle.join().unwrap().unwrap(),
        SessionEnd::Closed { .. }
    ));
}

#[test]
fn no_frames_without_a_client() {
    let server = Server::bind("127.0.0.1:0", interactive_scenario()).unwrap();
    let frames = server.frame_counter();
    std::thread::sleep(Duration::from_millis(150));
    assert_eq!(frames.load(Ordering::Relaxed), 0);
}
