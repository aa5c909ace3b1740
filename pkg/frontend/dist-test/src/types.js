/** Wire shapes of the /v1 API, as delivered by the server. */
export {};
