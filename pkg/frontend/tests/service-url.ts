/** Where the test run's repair service listens (spawned by global-setup). */
export const SERVICE_PORT = 8765;
export const SERVICE_URL = `http://127.0.0.1:${SERVICE_PORT}`;
