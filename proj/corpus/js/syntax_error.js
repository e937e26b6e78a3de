function broken( {
  $.get('https://api.spotify.com/v1/albums/1');
}
