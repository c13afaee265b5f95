#!/usr/bin/env python3
"""Drive the preview service the way the browser client does.

Starts the HTTP app in-process, opens a session with a gray image, uploads
scribbles, fetches an interactive preview and then the full-resolution
result. The exact same endpoints serve the canvas UI in frontend/.
"""

import base64
import io
import os
import threading
import time

import numpy as np
import uvicorn
from PIL import Image

from l1color.service import create_app

PORT = 8731
OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

server = uvicorn.Server(uvicorn.Config(create_app(), port=PORT, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)

import httpx

client = httpx.Client(base_url=f"http://127.0.0.1:{PORT}", timeout=120)
print("healthz:", client.get("/healthz").json())

# gray two-blob image
size = 96
xx, yy = np.meshgrid(np.linspace(0, 1, size), np.linspace(0, 1, size))
y = np.clip(0.35 + 0.4 * ((xx - 0.3) ** 2 + (yy - 0.5) ** 2 < 0.04)
            + 0.15 * ((xx - 0.7) ** 2 + (yy - 0.5) ** 2 < 0.06), 0, 1)
buf = io.BytesIO()
Image.fromarray((y * 255).astype(np.uint8)).convert("RGB").save(buf, format="PNG")

resp = client.post("/sessions", json={"image": base64.b64encode(buf.getvalue()).decode()})
session = resp.json()
print("session:", session)

scribbles = {
    "exact": True,
    "sites": [
        {"x": 29, "y": 48, "u": 0.25, "v": 0.10},   # left blob: warm
        {"x": 67, "y": 48, "u": -0.20, "v": -0.05},  # right blob: cool
        {"x": 5, "y": 5, "u": 0.0, "v": 0.0},        # background: neutral
    ],
}
print("scribbles:", client.put(f"/sessions/{session['id']}/scribbles", json=scribbles).json())

t = time.time()
preview = client.post(f"/sessions/{session['id']}/preview?method=l1").json()
print(f"preview in {time.time() - t:.2f}s:", preview["metrics"])
with open(os.path.join(OUT, "service_preview.png"), "wb") as fh:
    fh.write(base64.b64decode(preview["png"]))

client.post(f"/sessions/{session['id']}/preview?method=l1&full=true")
while True:
    body = client.get(f"/sessions/{session['id']}/result").json()
    if body["status"] == "done" and body["metrics"]["full"]:
        break
    time.sleep(0.1)
print("full solve:", body["metrics"])
with open(os.path.join(OUT, "service_full.png"), "wb") as fh:
    fh.write(base64.b64decode(body["png"]))

print(f"outputs in {OUT}/")
server.should_exit = True
thread.join(timeout=5)
