import pytest

from camtrap.config import AppConfig, load_config


def test_defaults():
    config = load_config(env={})
    assert config.api_host_port == ("127.0.0.1", 8080)
    assert config.smtp_host_port == ("127.0.0.1", 2525)
    assert config.detector == "mock"
    assert config.confidence_threshold == 0.387
    assert config.max_attachment_mb == 25.0


def test_file_values(tmp_path):
    path = tmp_path / "camtrap.cfg"
    path.write_text(
        "# deployment config\n"
        "SMTP_BIND=0.0.0.0:2525\n"
        "API_BIND=9090\n"
        "MAX_ATTACHMENT_MB=10\n"
        "QUEUE_DIR=/var/spool/camtrap\n"
        "AUTH_TOKEN=  tok123  \n",
        encoding="utf-8",
    )
    config = load_config(path, env={})
    assert config.smtp_host_port == ("0.0.0.0", 2525)
    assert config.api_host_port == ("127.0.0.1", 9090)
    assert config.max_attachment_mb == 10.0
    assert str(config.queue_path) == "/var/spool/camtrap"
    assert config.auth_token == "tok123"


def test_env_overrides_file(tmp_path):
    path = tmp_path / "camtrap.cfg"
    path.write_text("CONFIDENCE_THRESHOLD=0.5\n", encoding="utf-8")
    config = load_config(path, env={"CONFIDENCE_THRESHOLD": "0.25"})
    assert config.confidence_threshold == 0.25


def test_remote_detector_requires_endpoint():
    with pytest.raises(ValueError):
        load_config(env={"DETECTOR": "remote"})
    config = load_config(
        env={"DETECTOR": "remote", "DETECTOR_ENDPOINT": "http://gpu-box:8000"}
    )
    assert config.detector_endpoint == "http://gpu-box:8000"


def test_invalid_detector_kind():
    with pytest.raises(ValueError):
        AppConfig(detector="magic")


def test_malformed_file_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("JUST A LINE WITHOUT EQUALS\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(path, env={})


def test_queue_dir_defaults_under_data_dir():
    config = load_config(env={"DATA_DIR": "/srv/ct"})
    assert str(config.queue_path) == "/srv/ct/queue"


def test_smtp_tls_and_auth_must_come_in_pairs():
    with pytest.raises(ValueError):
        load_config(env={"SMTP_TLS_CERT": "/x/cert.pem"})
    with pytest.raises(ValueError):
        load_config(env={"SMTP_AUTH_USER": "cam"})
    config = load_config(
        env={"SMTP_AUTH_USER": "cam", "SMTP_AUTH_PASSWORD": "s3cret"}
    )
    assert config.smtp_auth_user == "cam"
