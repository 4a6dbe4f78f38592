from src.parallel.interfaces.transport_interface import Transport
from src.parallel.transports.inproc import InprocTransport
from src.parallel.transports.process import ProcessTransport
from src.parallel.transports.tcp import TcpTransport


class TransportFactory:
    """
    Создаёт транспорт по строке из --transport: "inproc", "proc" или
    "tcp=host:port,host:port".
    """

    @staticmethod
    def create(kind: str, cache_size: int = 4) -> Transport:
        if kind == "inproc":
            return InprocTransport(cache_size)
        if kind == "proc":
            return ProcessTransport(cache_size)
        if kind.startswith("tcp="):
            return TcpTransport([endpoint for endpoint in kind.removeprefix("tcp=").split(",") if endpoint])
        raise ValueError(f"Неизвестный тип транспорта: {kind}")
