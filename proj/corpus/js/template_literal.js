const API = 'https://api.spotify.com/v1';

const artist = (id) => $.getJSON ? $.get(`${API}/artists/${id}`) : null;
