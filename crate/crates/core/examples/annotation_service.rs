//! Starts the annotation service on a local port, saves annotations through
//! HTTP the way the UI does, and fetches the resulting report.
//!
//! cargo run --example annotation_service

use std::io::{Read, Write};
use std::net::TcpStream;
use std::sync::Arc;

use hope::ingest::{import_tsv, save_project, ColumnMapping};
use hope::service::{serve, ProjectService, REVISION_HEADER};

/// Minimal HTTP/1.1 client: one request per connection.
fn request(addr: std::net::SocketAddr, method: &str, path: &str, headers: &[(&str, &str)], body: &str) -> String {
    let mut stream = TcpStream::connect(addr).expect("connect");
    let mut head = format!(
        "{method} {path} HTTP/1.1\r\nhost: {addr}\r\nconnection: close\r\ncontent-length: {}\r\n",
        body.len()
    );
    for (k, v) in headers {
        head.push_str(&format!("{k}: {v}\r\n"));
    }
    write!(stream, "{head}\r\n{body}").expect("write");
    let mut response = String::new();
    stream.read_to_string(&mut response).expect("read");
    response
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let tsv = "Open the file.\tОткройте файл.\nClick Export.\tНажмите Вывоз.\n";
    let mut project = import_tsv(tsv.as_bytes(), &ColumnMapping::new(0).with_target("sys1", 1))?;
    project.project_id = "demo".into();
    save_project(&project, dir.path().join("demo.hope"))?;

    let service = Arc::new(ProjectService::open_dir(dir.path())?);
    let runtime = tokio::runtime::Runtime::new()?;
    let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let addr = listener.local_addr()?;
    runtime.spawn(serve(service, listener));
    println!("serving on http://{addr}\n");

    let save = |unit: &str, revision: &str, body: &str| {
        let path = format!("/projects/demo/units/{unit}/engines/sys1/annotations");
        request(
            addr,
            "PUT",
            &path,
            &[(REVISION_HEADER, revision), ("content-type", "application/json")],
            body,
        )
    };
    println!("{}\n", request(addr, "GET", "/projects", &[], ""));
    let body = r#"[{"error_type": "TRM", "severity": "minor"}, {"error_type": "MIS", "severity": "major"}]"#;
    println!("{}\n", save("000002", "0", body));
    println!("stale revision:\n{}\n", save("000001", "0", "[]"));
    println!("{}\n", save("000001", "1", "[]"));
    println!(
        "{}",
        request(addr, "GET", "/projects/demo/report?format=table", &[], "")
    );
    Ok(())
}
