import json
import os
import threading
import urllib.error
import urllib.request

import pytest

from conditor.index import build_index
from conditor.model import Association, Topic, TopicMap
from conditor.server import ConditorService, make_server


def sample_map():
    return TopicMap(
        topics={
            98: Topic(
                98,
                "Abd al-Malik ibn Hudayl ibn Razin",
                variants=["Abd al-Malik ibn Hudayl ibn Razin"],
                instance_of=38,
                shortdesc="Segundo soberano de la taifa de Albarracín.",
                body="Segundo soberano de la taifa de Albarracín. Murió en la Sahla.",
            ),
            99: Topic(99, "Abd al-Rahman I", instance_of=38, body="Primer emir."),
        },
        associations=[Association(98, 99, "mención", "TwoWay")],
        unresolved_refs=[(98, "taifa")],
    )


@pytest.fixture(scope="module")
def server_url(tmp_path_factory):
    static_dir = tmp_path_factory.mktemp("static")
    (static_dir / "index.html").write_text("<html>shell</html>", encoding="utf-8")
    (static_dir / "app.js").write_text("console.log(1)", encoding="utf-8")
    tm = sample_map()
    service = ConditorService(tm, build_index(tm.topics), static_dir=str(static_dir))
    server = make_server(service, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def get(url):
    try:
        with urllib.request.urlopen(url) as resp:
            return resp.status, resp.headers.get("Content-Type"), resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.headers.get("Content-Type"), err.read()


class TestSearchEndpoint:
    def test_basic_search(self, server_url):
        status, ctype, body = get(server_url + "/api/search?q=Albarrac%C3%ADn")
        assert status == 200 and ctype.startswith("application/json")
        hits = json.loads(body)
        assert hits[0]["id"] == 98
        assert set(hits[0]) == {"id", "score", "name", "snippet"}

    def test_k_limits_results(self, server_url):
        status, _, body = get(server_url + "/api/search?q=soberano%20OR%20emir&k=1")
        assert status == 200 and len(json.loads(body)) == 1

    def test_missing_q_is_400(self, server_url):
        status, _, body = get(server_url + "/api/search")
        assert status == 400 and "error" in json.loads(body)

    def test_bad_k_is_400(self, server_url):
        assert get(server_url + "/api/search?q=x&k=zero")[0] == 400
        assert get(server_url + "/api/search?q=x&k=-1")[0] == 400


class TestTopicEndpoint:
    def test_topic_payload(self, server_url):
        status, _, body = get(server_url + "/api/topic/98")
        assert status == 200
        doc = json.loads(body)
        assert doc["id"] == 98
        assert doc["baseName"] == "Abd al-Malik ibn Hudayl ibn Razin"
        assert doc["instanceOf"] == 38
        assert doc["associations"] == [
            {"source": 98, "target": 99, "role": "mención", "direction": "two-way"}
        ]

    def test_unknown_topic_is_404(self, server_url):
        assert get(server_url + "/api/topic/12345")[0] == 404

    def test_non_numeric_id_is_400(self, server_url):
        assert get(server_url + "/api/topic/abc")[0] == 400


class TestGraphEndpoint:
    def test_graph_payload(self, server_url):
        status, _, body = get(server_url + "/api/graph?root=98&depth=1")
        assert status == 200
        doc = json.loads(body)
        assert sorted(n["id"] for n in doc["nodes"]) == [98, 99]
        assert doc["edges"][0]["direction"] == "two-way"

    def test_unknown_root_is_404(self, server_url):
        assert get(server_url + "/api/graph?root=12345")[0] == 404

    def test_bad_params_are_400(self, server_url):
        assert get(server_url + "/api/graph?root=abc")[0] == 400
        assert get(server_url + "/api/graph?root=98&depth=-1")[0] == 400

    def test_unknown_api_path_is_404(self, server_url):
        assert get(server_url + "/api/unknown")[0] == 404


class TestStatic:
    def test_index_served_at_root(self, server_url):
        status, ctype, body = get(server_url + "/")
        assert status == 200 and ctype.startswith("text/html")
        assert b"shell" in body

    def test_asset_content_type(self, server_url):
        status, ctype, _ = get(server_url + "/app.js")
        assert status == 200 and ctype.startswith("application/javascript")

    def test_spa_fallback(self, server_url):
        status, _, body = get(server_url + "/topic/98")
        assert status == 200 and b"shell" in body

    def test_path_traversal_blocked(self, server_url):
        status, _, _ = get(server_url + "/..%2f..%2fetc%2fpasswd")
        assert status in (200, 404)  # never the real file
        _, _, body = get(server_url + "/..%2f..%2fetc%2fpasswd")
        assert b"root:" not in body
